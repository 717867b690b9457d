#pragma once

// Anti-holomorphic maps [Z] -> [conj(A Z)] of CP^n.

#include <optional>
#include <random>
#include <vector>

#include "zoll/cohomology.hpp"
#include "zoll/projective.hpp"

namespace zoll {

class AntiholMap {
 public:
  /// Throws InvalidArgument unless A is square and invertible.
  explicit AntiholMap(CMatrix A);

  const CMatrix& matrix() const noexcept { return A_; }
  int n() const noexcept { return static_cast<int>(A_.rows()) - 1; }
  double condition_number() const noexcept { return condition_; }

  ProjectivePoint apply(const ProjectivePoint& p) const;
  /// B^-bar^{-1} A B, the map conjugated by [Z] -> [B Z].
  AntiholMap conjugated(const CMatrix& B, cd unit = 1.0) const;

 private:
  CMatrix A_;
  double condition_ = 0.0;
};

struct InvolutionTest {
  bool involution = false;
  cd c = 0.0;              ///< conj(A) A = c Id
  double residual = 0.0;   ///< |conj(A) A - c Id| / |conj(A) A|
};

inline constexpr double involution_tol = 1e-9;

InvolutionTest is_involution(const AntiholMap& m);

enum class InvolutionType { Real, Quaternionic };

const char* to_string(InvolutionType type);

/// Throws NotInvolution or InconsistentSignature.
InvolutionType involution_type(const AntiholMap& m);

struct FixedPointSample {
  int trials = 0;
  int count = 0;                              ///< trials converging to a fixed point
  std::vector<ProjectivePoint> representatives;  ///< up to `keep` of them
  double min_residual = 0.0;                  ///< over all trials after refinement
  double max_fixed_residual = 0.0;            ///< over the accepted points
};

inline constexpr double fixed_point_accept = 1e-6;

/// Residual |conj(A v) - <conj(A v), v> v| for unit v, with A rescaled so |c| = 1.
double fixed_point_residual(const AntiholMap& m, const CVector& v);

FixedPointSample fixed_points_sample(const AntiholMap& m, int samples, std::mt19937_64& rng, int keep = 16);

/// Fixed set of the product involution: K1 x K2 with K = RP^n or the empty set.
struct ProductFixedSet {
  InvolutionType first = InvolutionType::Real;
  InvolutionType second = InvolutionType::Real;
  bool empty = false;
  CohomologyTable cohomology;  ///< of K1 x K2
  bool contradiction = false;  ///< cohomology differs from that of CP^n
};

ProductFixedSet product_involution_fixed_set(const AntiholMap& first, const AntiholMap& second);

/// Standard structures: identity and [[0, -I], [I, 0]] (n + 1 even).
CMatrix standard_real_structure(int n);
CMatrix standard_quaternionic_structure(int n);

/// Random matrix with entries of modulus O(1) and condition number below `max_condition`.
CMatrix random_invertible(int size, std::mt19937_64& rng, double max_condition = 50.0);

}  // namespace zoll
