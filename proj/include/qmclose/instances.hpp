#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmclose/qmodule.hpp"

namespace qmclose {

// Built-in problem instances.  Variables are x1..xn (or x, y for the
// bivariate strip examples).
QuadraticModuleSpec instance_ball(int n);
// Quadratic module of x1-1, ..., xn-1, c - x1*...*xn (compact K, not
// archimedean, stable).
QuadraticModuleSpec instance_3_3(int n, const Rational& c);
// Quadratic module of 1-x1, ..., 1-xn, x1*...*xn - c, x1*xn^2,
// x1*x2*xn^2, ..., x1*...*x_{n-1}*xn^2.
QuadraticModuleSpec instance_3_4(int n, const Rational& c);
// Preordering of (1-x)*x*y^2 over R[x,y].
QuadraticModuleSpec instance_4_2();
// Preordering of (1-x)*x over R[x,y] (the strip).
QuadraticModuleSpec instance_4_2_n();
// Preordering of (1-x)*x^3 over R[x,y]; x is nonnegative on its set but
// has no representation, the separation target.
QuadraticModuleSpec instance_couex();
// Preordering of (1-x)*x^3*y^2 over R[x,y]; only constants are bounded on
// its semiordering space.
QuadraticModuleSpec instance_couex_m();

// Parse "name" or "name:arg1:arg2", e.g. "ball:2", "3_3:2:1",
// "example_3_4:3:1/4", "couex".  Throws std::invalid_argument on unknown
// names or malformed arguments.
QuadraticModuleSpec get_instance(const std::string& text);
std::vector<std::string> instance_names();

// Sample points of K_M for the built-in instances (rejection sampling with
// instance-specific boxes; deterministic per seed).
std::vector<std::vector<double>> sample_k_points(const QuadraticModuleSpec& M, int count,
                                                 uint64_t seed);

}  // namespace qmclose
