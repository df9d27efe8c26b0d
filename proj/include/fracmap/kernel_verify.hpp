#pragma once

// Pointwise check of the product-of-kernel-differences estimate
//
//   | |eta-y|^{-n+a} - |eta-x|^{-n+a} | * | |xi-y|^{-n+a} - |xi-x|^{-n+a} |
//     <= C (Type I + Type II + Type III + Type IV)
//
// in true Euclidean geometry of R^n (no periodic wrap-around).

#include <array>
#include <cstdint>

#include "fracmap/torus_field.hpp"

namespace fracmap {

struct Quadruple {
  int dim = 1;
  Point x{};
  Point y{};
  Point eta{};
  Point xi{};
  double alpha = 0.5;    // in [0, 1]
  double epsilon = 0.5;  // in (0, 1)
};

/// Euclidean distance in the first `dim` coordinates.
double euclidean_distance(Point a, Point b, int dim);

/// Throws InvalidArgument if two of the four points coincide.
double kernel_lhs(const Quadruple& q);

struct TypeBreakdown {
  double type1 = 0.0;  // |y-eta|^{-n+a-e} |x-xi|^{-n+a-e} |x-y|^{2e}
  double type2 = 0.0;  // |y-eta|^{-n+a-e} |y-xi|^{-n+a-e} |x-y|^{2e}
  double type3 = 0.0;  // |x-eta|^{-n+a-e} |y-xi|^{-n+a-e} |x-y|^{2e}
  double type4 = 0.0;  // |x-eta|^{-n+a} |x-xi|^{-n+a} 1{|x-y| > 2|x-xi|} 1{|x-y| > 2|x-eta|}
  double total() const { return type1 + type2 + type3 + type4; }
};

/// Throws InvalidArgument for coincident points or epsilon outside (0, 1).
TypeBreakdown kernel_rhs(const Quadruple& q);

/// Regions of (x, y, eta); exactly one applies by the triangle inequality.
///   chi1: |x-y| <= 2|y-eta| and |x-y| <= 2|x-eta|
///   chi2: |x-y| <= 2|y-eta| and |x-y| >  2|x-eta|
///   chi3: |x-y| >  2|y-eta| and |x-y| <= 2|x-eta|
enum class Region { chi1, chi2, chi3 };
Region classify(Point x, Point y, Point eta, int dim);

struct RegionBound {
  Region region = Region::chi1;
  double difference = 0.0;     // k(x, y, eta) = | |eta-y|^{-n+a} - |eta-x|^{-n+a} |
  double bound = 0.0;          // region majorant without constant
  double comparability = 1.0;  // |y-eta| / |x-eta|
  double ratio() const { return bound > 0.0 ? difference / bound : 0.0; }
};

/// Single-difference majorant of the active region:
///   chi1, chi2: |x-eta|^{-n+a-e} |x-y|^e;  chi3: |y-eta|^{-n+a-e} |x-y|^e.
RegionBound mvt_region_bounds(Point x, Point y, Point eta, double alpha, double eps, int dim);

struct SearchConfig {
  double alpha = 0.5;
  double epsilon = 0.35;
  int dim = 1;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double box = 10.0;  // points drawn from [-box, box]^n
};

struct SearchResult {
  SearchConfig config;
  double c_emp = 0.0;
  std::size_t worst_index = 0;
  Quadruple worst{};
  double worst_lhs = 0.0;
  TypeBreakdown worst_types{};
  std::size_t skipped = 0;       // 0/0 quadruples
  double mvt_constant = 0.0;     // max k / region bound over both triples
  double chi1_ratio_min = 1.0;   // |y-eta|/|x-eta| range on chi1 triples
  double chi1_ratio_max = 1.0;
};

/// Deterministic quadruple for sample `index`: half uniform in the box, half
/// with |x-y| log-uniform in [1e-6, 1] and eta, xi at log-uniform distances
/// from x or y.
Quadruple sample_quadruple(const SearchConfig& config, std::size_t index);

/// C_emp = max lhs/rhs over the samples (ties keep the lowest index).
/// Throws InvalidArgument for alpha outside [0, 1], epsilon outside (0, 1)
/// or fewer than 1000 samples; throws Falsification if some sample has
/// rhs == 0 < lhs.
SearchResult constant_search(const SearchConfig& config);

}  // namespace fracmap
