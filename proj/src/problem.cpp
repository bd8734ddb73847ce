#include "annealroot/problem.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "annealroot/error.hpp"

namespace annealroot {
namespace {

using namespace std::complex_literals;

Complex conj_pair_root(double re, double im) { return {re, im}; }

// Appends r and its complex conjugate.
void add_pair(std::vector<Complex>& roots, double re, double im) {
  roots.push_back(conj_pair_root(re, -im));
  roots.push_back(conj_pair_root(re, im));
}

std::vector<ScalarProblem> build_registry() {
  std::vector<ScalarProblem> out;
  out.reserve(14);

  out.push_back({
      "f1",
      [](Complex z) { return (z * z - 1.0) * (z * z + 1.0); },
      [](Complex z) { return 4.0 * z * z * z; },
      [](Complex z) { return 12.0 * z * z; },
      {1.0, -1.0, 1i, -1i},
      "(x^2 - 1)(x^2 + 1)",
  });

  {
    const double s = std::sqrt(3.0) / 2.0;
    out.push_back({
        "f2",
        [](Complex z) { return z * z * z - 1.0; },
        [](Complex z) { return 3.0 * z * z; },
        [](Complex z) { return 6.0 * z; },
        {1.0, {-0.5, s}, {-0.5, -s}},
        "x^3 - 1",
    });
  }

  {
    std::vector<Complex> roots;
    for (int k = 0; k < 12; ++k) {
      roots.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 12.0));
    }
    out.push_back({
        "f3",
        [](Complex z) {
          const Complex z2 = z * z;
          const Complex z4 = z2 * z2;
          return z4 * z4 * z4 - 1.0;
        },
        [](Complex z) {
          const Complex z2 = z * z;
          const Complex z4 = z2 * z2;
          return 12.0 * z4 * z4 * z2 * z;
        },
        [](Complex z) {
          const Complex z2 = z * z;
          const Complex z4 = z2 * z2;
          return 132.0 * z4 * z4 * z2;
        },
        std::move(roots),
        "x^12 - 1",
    });
  }

  out.push_back({
      "f4",
      [](Complex z) { return (z * z - 4.0) * (z + 1.5) * (z - 0.5); },
      [](Complex z) {
        return 2.0 * z * (z + 1.5) * (z - 0.5) + (z * z - 4.0) * (2.0 * z + 1.0);
      },
      [](Complex z) { return 12.0 * z * z + 6.0 * z - 9.5; },
      {-2.0, -1.5, 0.5, 2.0},
      "(x^2 - 4)(x + 1.5)(x - 0.5)",
  });

  // Factored evaluation keeps relative accuracy near the double root at -1.5.
  out.push_back({
      "f5",
      [](Complex z) {
        const Complex b = z + 1.5;
        return (z + 2.0) * b * b * (z - 0.5) * (z - 2.0);
      },
      [](Complex z) {
        const Complex a = z + 2.0, b = z + 1.5, c = z - 0.5, d = z - 2.0;
        return b * (b * c * d + 2.0 * a * c * d + a * b * d + a * b * c);
      },
      [](Complex z) {
        const Complex a = z + 2.0, b = z + 1.5, c = z - 0.5, d = z - 2.0;
        const Complex g = b * c * d + 2.0 * a * c * d + a * b * d + a * b * c;
        const Complex dg = (c * d + b * d + b * c) + 2.0 * (c * d + a * d + a * c) +
                           (b * d + a * d + a * b) + (b * c + a * c + a * b);
        return g + b * dg;
      },
      {-2.0, -1.5, 0.5, 2.0},
      "(x + 2)(x + 1.5)^2 (x - 0.5)(x - 2)",
  });

  out.push_back({
      "f6",
      [](Complex z) { return std::sin(z); },
      [](Complex z) { return std::cos(z); },
      [](Complex z) { return -std::sin(z); },
      {0.0, std::numbers::pi, -std::numbers::pi},
      "sin(x)",
  });

  {
    std::vector<Complex> roots{2.3652300134140968458};
    add_pair(roots, -1.6826150067070484229, 0.35825935992404299161);
    out.push_back({
        "f7",
        [](Complex z) {
          const Complex y = z - 1.0;
          return y * y * y + 4.0 * y * y - 10.0;
        },
        [](Complex z) {
          const Complex y = z - 1.0;
          return 3.0 * y * y + 8.0 * y;
        },
        [](Complex z) { return 6.0 * (z - 1.0) + 8.0; },
        std::move(roots),
        "(x - 1)^3 + 4(x - 1)^2 - 10",
    });
  }

  {
    std::vector<Complex> roots{-0.0044916482153412260351, 2.804491648215341226};
    add_pair(roots, 1.4, 1.2489718449098301519);
    add_pair(roots, -2.794402989934055092, 2.2336936830547953061);
    out.push_back({
        "f8",
        [](Complex z) {
          const Complex y = z - 1.4;
          const Complex s = std::sin(y);
          return s * s - y * y + 1.0;
        },
        [](Complex z) {
          const Complex y = z - 1.4;
          return 2.0 * std::sin(y) * std::cos(y) - 2.0 * y;
        },
        [](Complex z) { return 2.0 * std::cos(2.0 * (z - 1.4)) - 2.0; },
        std::move(roots),
        "sin(x - 14/10)^2 - (x - 14/10)^2 + 1",
    });
  }

  {
    std::vector<Complex> roots{0.25753028543986076046};
    add_pair(roots, 2.0843814071308916481, 2.7330067253609595812);
    out.push_back({
        "f9",
        [](Complex z) { return z * z - std::exp(z) - 3.0 * z + 2.0; },
        [](Complex z) { return 2.0 * z - std::exp(z) - 3.0; },
        [](Complex z) { return 2.0 - std::exp(z); },
        std::move(roots),
        "x^2 - e^x - 3x + 2",
    });
  }

  {
    std::vector<Complex> roots{1.4890851332151606417};
    add_pair(roots, -1.7368856989085602307, 1.809361341295703319);
    out.push_back({
        "f10",
        [](Complex z) { return std::cos(z - 0.75) - z + 0.75; },
        [](Complex z) { return -std::sin(z - 0.75) - 1.0; },
        [](Complex z) { return -std::cos(z - 0.75); },
        std::move(roots),
        "cos(x - 3/4) - x + 3/4",
    });
  }

  out.push_back({
      "f11",
      [](Complex z) {
        const Complex y = z + 1.0;
        return y * y * y - 1.0;
      },
      [](Complex z) {
        const Complex y = z + 1.0;
        return 3.0 * y * y;
      },
      [](Complex z) { return 6.0 * (z + 1.0); },
      {0.0, {-1.5, std::sqrt(3.0) / 2.0}, {-1.5, -std::sqrt(3.0) / 2.0}},
      "(x + 1)^3 - 1",
  });

  {
    // cbrt(10) times the cube roots of unity, shifted by 2.
    const double c = std::cbrt(10.0);
    const double h = c * std::sqrt(3.0) / 2.0;
    out.push_back({
        "f12",
        [](Complex z) {
          const Complex y = z - 2.0;
          return y * y * y - 10.0;
        },
        [](Complex z) {
          const Complex y = z - 2.0;
          return 3.0 * y * y;
        },
        [](Complex z) { return 6.0 * (z - 2.0); },
        {2.0 + c, {2.0 - c / 2.0, h}, {2.0 - c / 2.0, -h}},
        "(x - 2)^3 - 10",
    });
  }

  {
    std::vector<Complex> roots{-2.457647827130918927};
    add_pair(roots, -2.8572413973126663994, 1.3075203974010495864);
    add_pair(roots, 0.089969494418696607375, 0.75857208933039603811);
    add_pair(roots, 0.62269190751891500617, 1.6742637889305520242);
    add_pair(roots, 1.1784910990109883143, 2.1677188395965555783);
    add_pair(roots, 1.7134416222687174045, 2.6006391556137261606);
    out.push_back({
        "f13",
        [](Complex z) {
          const Complex y = z + 1.25;
          const Complex s = std::sin(y);
          return y * std::exp(y * y) - s * s + 3.0 * std::cos(y) + 5.0;
        },
        [](Complex z) {
          const Complex y = z + 1.25;
          return std::exp(y * y) * (1.0 + 2.0 * y * y) -
                 2.0 * std::sin(y) * std::cos(y) - 3.0 * std::sin(y);
        },
        [](Complex z) {
          const Complex y = z + 1.25;
          return std::exp(y * y) * (6.0 * y + 4.0 * y * y * y) -
                 2.0 * std::cos(2.0 * y) - 3.0 * std::cos(y);
        },
        std::move(roots),
        "(x + 5/4) e^{(x + 5/4)^2} - sin(x + 5/4)^2 + 3 cos(x + 5/4) + 5",
    });
  }

  {
    // f14 has roots accumulating at 0; only the outer rings are listed.
    std::vector<Complex> roots{0.0};
    for (double sign : {-1.0, 1.0}) {
      add_pair(roots, sign * 0.41160958525494265502, 0.14073807761591160559);
      add_pair(roots, sign * 0.17690943409745912188, 0.039306353331244197442);
    }
    out.push_back({
        "f14",
        [](Complex z) {
          if (z == Complex{}) return Complex{};
          return z + z * z * std::sin(2.0 / z);
        },
        // deriv(0) is undefined; returning 0 trips the derivative guard.
        [](Complex z) {
          if (z == Complex{}) return Complex{};
          const Complex w = 2.0 / z;
          return 1.0 + 2.0 * z * std::sin(w) - 2.0 * std::cos(w);
        },
        [](Complex z) {
          if (z == Complex{}) {
            return Complex{std::numeric_limits<double>::quiet_NaN(), 0.0};
          }
          const Complex w = 2.0 / z;
          return 2.0 * std::sin(w) - 4.0 * std::cos(w) / z -
                 4.0 * std::sin(w) / (z * z);
        },
        std::move(roots),
        "x + sin(2/x) x^2",
    });
  }

  return out;
}

}  // namespace

const std::vector<ScalarProblem>& list_problems() {
  static const std::vector<ScalarProblem> registry = build_registry();
  return registry;
}

const ScalarProblem& find_problem(std::string_view id) {
  for (const auto& p : list_problems()) {
    if (p.id == id) return p;
  }
  throw Error(ErrorCode::UnknownFunction,
              "unknown function id '" + std::string(id) + "'");
}

ScalarProblem make_affine_problem(Complex a, Complex b) {
  if (a == Complex{}) {
    throw Error(ErrorCode::InvalidArgument, "affine problem needs a != 0");
  }
  return {
      "affine",
      [a, b](Complex z) { return a * z + b; },
      [a](Complex) { return a; },
      [](Complex) { return Complex{}; },
      {-b / a},
      "a x + b",
  };
}

}  // namespace annealroot
