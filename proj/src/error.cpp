#include "porosplit/error.hpp"

namespace porosplit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidGeometry: return "InvalidGeometry";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::InvalidBoundarySpec: return "InvalidBoundarySpec";
    case ErrorKind::InvalidMaterial: return "InvalidMaterial";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::Divergence: return "Divergence";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace porosplit
