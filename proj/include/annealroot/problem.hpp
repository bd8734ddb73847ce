#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace annealroot {

using Complex = std::complex<double>;
using ComplexFn = std::function<Complex(Complex)>;

/// A complex-analytic function with hand-coded derivatives.
struct ScalarProblem {
  std::string id;
  ComplexFn eval;
  ComplexFn deriv;
  std::optional<ComplexFn> deriv2;
  std::vector<Complex> known_roots;
  std::string display;
};

/// The fourteen benchmark functions f1..f14, in order.
const std::vector<ScalarProblem>& list_problems();

/// Looks up a registered problem by id ("f1".."f14").
/// Throws Error(UnknownFunction) for an absent key.
const ScalarProblem& find_problem(std::string_view id);

/// f(z) = a z + b. Used for one-step sanity checks.
ScalarProblem make_affine_problem(Complex a, Complex b);

}  // namespace annealroot
