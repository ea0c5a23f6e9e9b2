#pragma once

#include <stdexcept>
#include <vector>

namespace lselast {

/// Quadrature rule on the reference triangle {(x,y): x,y >= 0, x+y <= 1}.
/// Weights are positive and sum to the reference area 1/2.
struct QuadRule {
  struct Point {
    double x, y;
  };
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(points.size()); }
};

namespace detail {

// Symmetric orbits in barycentric coordinates; w is relative to unit total.
inline void orbit1(QuadRule& q, double w) {
  q.points.push_back({1.0 / 3.0, 1.0 / 3.0});
  q.weights.push_back(0.5 * w);
}
inline void orbit3(QuadRule& q, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  // barycentric (b,a,a) and permutations; cartesian (l1, l2) with l0 = 1-l1-l2
  q.points.push_back({a, a});
  q.points.push_back({b, a});
  q.points.push_back({a, b});
  for (int i = 0; i < 3; ++i) q.weights.push_back(0.5 * w);
}
inline void orbit6(QuadRule& q, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const double xs[6][2] = {{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}};
  for (auto& p : xs) {
    q.points.push_back({p[0], p[1]});
    q.weights.push_back(0.5 * w);
  }
}

}  // namespace detail

/// Dunavant-type rule exact for polynomials up to `degree` (1..6), all
/// weights positive.
inline QuadRule quadrature_rule(int degree) {
  if (degree < 1 || degree > 6) throw std::invalid_argument("quadrature degree must be in [1,6]");
  QuadRule q;
  q.degree = degree;
  switch (degree) {
    case 1:
      detail::orbit1(q, 1.0);
      break;
    case 2:
      detail::orbit3(q, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:  // the degree-4 rule doubles as a positive-weight degree-3 rule
    case 4:
      detail::orbit3(q, 0.091576213509771, 0.109951743655322);
      detail::orbit3(q, 0.445948490915965, 0.223381589678011);
      break;
    case 5:
      detail::orbit1(q, 0.225);
      detail::orbit3(q, 0.470142064105115, 0.132394152788506);
      detail::orbit3(q, 0.101286507323456, 0.125939180544827);
      break;
    case 6:
      detail::orbit3(q, 0.063089014491502, 0.050844906370207);
      detail::orbit3(q, 0.249286745170910, 0.116786275726379);
      detail::orbit6(q, 0.310352451033785, 0.053145049844816, 0.082851075618374);
      break;
  }
  return q;
}

/// Gauss-Legendre rule on [-1,1], n = 1..4 points (exact to degree 2n-1).
struct GaussRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

inline GaussRule1D gauss_rule_1d(int n) {
  GaussRule1D g;
  switch (n) {
    case 1:
      g.points = {0.0};
      g.weights = {2.0};
      break;
    case 2:
      g.points = {-0.5773502691896257, 0.5773502691896257};
      g.weights = {1.0, 1.0};
      break;
    case 3:
      g.points = {-0.7745966692414834, 0.0, 0.7745966692414834};
      g.weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    case 4:
      g.points = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                  0.8611363115940526};
      g.weights = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                   0.3478548451374538};
      break;
    default:
      throw std::invalid_argument("gauss_rule_1d supports 1..4 points");
  }
  return g;
}

}  // namespace lselast
