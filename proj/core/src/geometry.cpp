#include "pcurv/geometry.hpp"

namespace pcurv {

Christoffel christoffel(const Mat2<double>& g, const std::array<Mat2<double>, 2>& dg) {
  const double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  if (!(det > kDegenerateDetG)) throw DegenerateJet(det);
  const Mat2<double> ginv = detail::inverse2(g, det);

  // Gamma^c_ab = 1/2 g^{cd} (d_a g_db + d_b g_da - d_d g_ab)
  Christoffel out;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double s = 0.0;
        for (int d = 0; d < 2; ++d) s += ginv[c][d] * (dg[a][d][b] + dg[b][d][a] - dg[d][a][b]);
        out.gamma[c][a][b] = 0.5 * s;
      }
  return out;
}

std::array<Mat2<double>, 2> metric_derivative(const Jet2& jet) {
  std::array<Mat2<double>, 2> dg{};
  const int n = jet.dim;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        dg[c][a][b] = detail::dot(jet.d2f[c][a], jet.df[b], n) + detail::dot(jet.df[a], jet.d2f[c][b], n);
  return dg;
}

}  // namespace pcurv
