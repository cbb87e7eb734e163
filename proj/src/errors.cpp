#include "quorum/errors.hpp"

namespace quorum {

const char* to_string(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::Usage: return "usage";
    case ErrorClass::Config: return "config";
    case ErrorClass::Io: return "io";
    case ErrorClass::Schema: return "schema";
    case ErrorClass::Parse: return "parse";
    case ErrorClass::Transport: return "transport";
    case ErrorClass::Validation: return "validation";
  }
  return "unknown";
}

}  // namespace quorum
