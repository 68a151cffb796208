#include "lopt/errors.hpp"

namespace lopt {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::MissingQuartic: return "MissingQuartic";
    case ErrorKind::WrongSignQuartic: return "WrongSignQuartic";
    case ErrorKind::NoTurningPoint: return "NoTurningPoint";
    case ErrorKind::ShapeViolation: return "ShapeViolation";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::OrderOverflow: return "OrderOverflow";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::ZeroValue: return "ZeroValue";
    case ErrorKind::ZeroNormalizer: return "ZeroNormalizer";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::NoSaddle: return "NoSaddle";
    case ErrorKind::BoundaryRegion: return "BoundaryRegion";
    case ErrorKind::Divergent: return "Divergent";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace lopt
