#include "skewcount/error.hpp"

namespace skewcount {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::OutsideConvergenceRegion: return "outside convergence region";
    case ErrorKind::ToleranceUnreachable: return "tolerance unreachable";
    case ErrorKind::IndeterminateEvaluation: return "indeterminate evaluation";
    case ErrorKind::DegenerateComposition: return "degenerate composition";
    case ErrorKind::TotalDegeneration: return "total degeneration";
    case ErrorKind::NotCoprime: return "numerator and denominator not coprime";
    case ErrorKind::NoConvergence: return "no convergence";
    case ErrorKind::EnumerationCapExceeded: return "enumeration cap exceeded";
    case ErrorKind::PeriodAmbiguous: return "period detection ambiguous";
    case ErrorKind::PotentialUndefined: return "potential undefined at orbit point";
    case ErrorKind::OrbitClosureMismatch: return "orbit closure mismatch";
    case ErrorKind::MultiplierUndefined: return "multiplier undefined";
    case ErrorKind::MissingDivisorData: return "missing divisor data";
    case ErrorKind::LambdaNotPositive: return "lambda not positive";
    case ErrorKind::TailNotCertifiable: return "tail not certifiable";
    case ErrorKind::OutsideRadius: return "outside radius";
    case ErrorKind::HypothesisImplausible: return "hypothesis implausible";
    case ErrorKind::WindowTooShort: return "window too short";
    case ErrorKind::NonpositiveComparator: return "nonpositive comparator";
    case ErrorKind::Inconsistent: return "internal consistency check failed";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Config:
    case ErrorKind::Io:
      return false;
    default:
      return true;
  }
}

}  // namespace skewcount
