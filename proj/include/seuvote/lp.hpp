#pragma once

#include "seuvote/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace seuvote {

/// Dense exact LP: maximize c.y subject to A y <= b, y >= 0, with b >= 0 so
/// the origin is feasible. Simplex with Bland's rule over rationals.
struct LinearProgram {
    std::vector<Rational> objective;
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> bounds;
};

struct LpSolution {
    bool bounded = true;
    Rational value;
    std::vector<Rational> point;
};

LpSolution maximize(const LinearProgram& lp);

/// One strict homogeneous constraint: sum_j coeffs[j] * x_j > 0.
using StrictRow = std::vector<Rational>;

/// Finds x with every x_j > 0, sum x_j = 1 and every row strictly positive,
/// or nothing if no such x exists. Exact.
std::optional<std::vector<Rational>> find_strict_point(int num_vars, const std::vector<StrictRow>& rows);

class Rng;

/// Same as find_strict_point, then moves the point part of the way towards a
/// random positive vector while keeping every row positive.
std::optional<std::vector<Rational>> find_strict_point_jittered(int num_vars, const std::vector<StrictRow>& rows,
                                                                Rng& rng, long denominator_bound);

}  // namespace seuvote
