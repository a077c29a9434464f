#include "fga/error.hpp"

namespace fga {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_geometry: return "invalid_geometry";
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::reduction_failure: return "reduction_failure";
    case ErrorKind::oracle_failure: return "oracle_failure";
    case ErrorKind::scale: return "scale";
    case ErrorKind::over_barrier: return "over_barrier";
    case ErrorKind::size_mismatch: return "size_mismatch";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::embedding_incomplete: return "embedding_incomplete";
    case ErrorKind::schedule: return "schedule";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace fga
