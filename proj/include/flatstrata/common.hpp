#pragma once

// Shared error model, run configuration, and small numeric helpers used by
// every other header in the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatstrata {

using cplx = std::complex<double>;

// Every failure the library can signal deliberately.  The category decides
// the process exit code at the CLI boundary: validation problems map to 2,
// resource/tolerance problems map to 3.
enum class ErrorCode {
  // surface validation
  UnmatchedEdge,
  NonTranslationGluing,
  SelfIntersectingPolygon,
  AngleNotMultipleOf2Pi,
  SignatureMismatch,
  ZeroScalar,
  UnknownFamily,
  ParamOutOfRange,
  BoundaryNotMarked,
  UnsupportedFormat,
  BadFile,
  // homology / deformation
  RankMismatch,
  SizeMismatch,
  PolygonDegenerates,
  ClosureViolation,
  DeformFailed,
  // enumeration / functionals
  BudgetExceeded,
  RankDeficient,
  NotInCover,
  ZetaOutOfDomain,
  ChainNotDecreasing,
  ChainTooDeep,
  GenusTooSmall,
  // numerics
  NotHermitian,
  NonSmoothPoint,
  // cli
  UnknownCommand,
  BadFlag,
  Internal,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnmatchedEdge: return "UnmatchedEdge";
    case ErrorCode::NonTranslationGluing: return "NonTranslationGluing";
    case ErrorCode::SelfIntersectingPolygon: return "SelfIntersectingPolygon";
    case ErrorCode::AngleNotMultipleOf2Pi: return "AngleNotMultipleOf2Pi";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::ZeroScalar: return "ZeroScalar";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::BoundaryNotMarked: return "BoundaryNotMarked";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::BadFile: return "BadFile";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::PolygonDegenerates: return "PolygonDegenerates";
    case ErrorCode::ClosureViolation: return "ClosureViolation";
    case ErrorCode::DeformFailed: return "DeformFailed";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotInCover: return "NotInCover";
    case ErrorCode::ZetaOutOfDomain: return "ZetaOutOfDomain";
    case ErrorCode::ChainNotDecreasing: return "ChainNotDecreasing";
    case ErrorCode::ChainTooDeep: return "ChainTooDeep";
    case ErrorCode::GenusTooSmall: return "GenusTooSmall";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NonSmoothPoint: return "NonSmoothPoint";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::BadFlag: return "BadFlag";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

// True for errors that mean "input rejected" rather than "computation gave up".
inline bool is_validation_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnmatchedEdge:
    case ErrorCode::NonTranslationGluing:
    case ErrorCode::SelfIntersectingPolygon:
    case ErrorCode::AngleNotMultipleOf2Pi:
    case ErrorCode::SignatureMismatch:
    case ErrorCode::ZeroScalar:
    case ErrorCode::UnknownFamily:
    case ErrorCode::ParamOutOfRange:
    case ErrorCode::BoundaryNotMarked:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::BadFile:
    case ErrorCode::SizeMismatch:
    case ErrorCode::GenusTooSmall:
    case ErrorCode::ChainNotDecreasing:
    case ErrorCode::ChainTooDeep:
    case ErrorCode::UnknownCommand:
    case ErrorCode::BadFlag:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

// Tolerances and budgets shared by all operations.  Geometric comparisons are
// scaled by the surface diameter so that rescaling a surface by lambda leaves
// every accept/reject decision unchanged.
struct Config {
  double eps_geom = 1e-9;    // point/segment coincidence, relative to diameter
  double eps_angle = 1e-7;   // cone angle defect from a multiple of 2*pi
  double eps_rank = 1e-8;    // numeric rank threshold for homology classes
  double tol_eig_rel = 1e-5; // eigenvalue zero-band, relative to spectral radius
  double fd_step_rel = 1e-3; // finite-difference step, relative to the systole
  std::int64_t node_budget = 2'000'000; // unfolding search node cap
  std::uint64_t seed = 20140512;        // deterministic sampling seed

  // Budgets below 1e4 nodes cannot certify even the builtin examples.
  void check() const {
    require(node_budget >= 10'000, ErrorCode::ParamOutOfRange,
            "node budget must be at least 10000");
    require(eps_geom > 0 && eps_angle > 0 && eps_rank > 0 && tol_eig_rel > 0 &&
                fd_step_rel > 0,
            ErrorCode::ParamOutOfRange, "tolerances must be positive");
  }

  static Config with_env() {
    Config c;
    if (const char* b = std::getenv("FLATSTRATA_BUDGET")) {
      char* end = nullptr;
      long long v = std::strtoll(b, &end, 10);
      if (end && *end == '\0' && v > 0) c.node_budget = v;
    }
    return c;
  }
};

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

inline double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }

inline double sq(double x) { return x * x; }

}  // namespace flatstrata
