#pragma once

// Pointwise differential geometry of an immersed surface f: Omega -> R^n,
// evaluated from a second-order jet (f, Df, D^2 f) at one parameter point.
//
// All routines are templates over the scalar type so the same code runs on
// doubles and on forward-mode duals (used to differentiate coefficient fields
// with respect to the jet slots).

#include <array>
#include <cmath>
#include <cstddef>

#include "pcurv/dual.hpp"
#include "pcurv/errors.hpp"

namespace pcurv {

inline constexpr int kMinDim = 3;
inline constexpr int kMaxDim = 8;
inline constexpr double kDegenerateDetG = 1e-14;

template <class T>
using VecN = std::array<T, kMaxDim>;
template <class T>
using Mat2 = std::array<std::array<T, 2>, 2>;
template <class T>
using HessN = std::array<std::array<VecN<T>, 2>, 2>;

template <class T>
struct BasicJet2 {
  int dim = 3;
  VecN<T> f{};
  std::array<VecN<T>, 2> df{};  // df[a] = d_a f
  HessN<T> d2f{};               // d2f[a][b] = d_ab f, symmetric in (a, b)
};
using Jet2 = BasicJet2<double>;

template <class T>
struct BasicCurvatureData {
  int dim = 3;
  Mat2<T> g{};
  Mat2<T> ginv{};
  T detg{};
  T sqrtdetg{};
  std::array<VecN<T>, kMaxDim> pperp{};  // row-major projector onto the normal space
  HessN<T> A{};                          // A_ab = P^perp d_ab f
  VecN<T> H{};                           // g^{ab} A_ab
  T normA2{};
  T normH2{};
  // Tangential coefficients of the Hessian, d_ab f = gamma[c][a][b] d_c f + A_ab.
  // These are the Christoffel symbols of the induced metric.
  std::array<Mat2<T>, 2> gamma{};
};
using CurvatureData = BasicCurvatureData<double>;

// Gamma[c][a][b] = Christoffel symbol of the second kind.
struct Christoffel {
  std::array<Mat2<double>, 2> gamma{};
};

namespace detail {

template <class T>
T dot(const VecN<T>& a, const VecN<T>& b, int n) {
  T s{};
  for (int k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

template <class T>
T power(const T& base, double e) {
  if (e == 0.0) return T(1.0);
  if (e == 1.0) return base;
  using std::pow;
  return pow(base, e);
}

template <class T>
Mat2<T> inverse2(const Mat2<T>& m, const T& det) {
  Mat2<T> inv;
  inv[0][0] = m[1][1] / det;
  inv[1][1] = m[0][0] / det;
  inv[0][1] = -m[0][1] / det;
  inv[1][0] = -m[1][0] / det;
  return inv;
}

}  // namespace detail

template <class T>
BasicCurvatureData<T> curvature_data(const BasicJet2<T>& jet) {
  using detail::dot;
  const int n = jet.dim;
  BasicCurvatureData<T> cd;
  cd.dim = n;

  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) cd.g[a][b] = dot(jet.df[a], jet.df[b], n);
  cd.detg = cd.g[0][0] * cd.g[1][1] - cd.g[0][1] * cd.g[1][0];
  if (!(value_of(cd.detg) > kDegenerateDetG)) throw DegenerateJet(value_of(cd.detg));
  cd.ginv = detail::inverse2(cd.g, cd.detg);
  using std::sqrt;
  cd.sqrtdetg = sqrt(cd.detg);

  // P^perp = Id - g^{ab} <d_a f, .> d_b f
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      T t{};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) t += cd.ginv[a][b] * jet.df[b][k] * jet.df[a][l];
      cd.pperp[k][l] = (k == l ? T(1.0) : T(0.0)) - t;
    }
  }

  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int k = 0; k < n; ++k) {
        T s{};
        for (int l = 0; l < n; ++l) s += cd.pperp[k][l] * jet.d2f[a][b][l];
        cd.A[a][b][k] = s;
      }
    }
  }

  for (int k = 0; k < n; ++k) {
    T s{};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) s += cd.ginv[a][b] * cd.A[a][b][k];
    cd.H[k] = s;
  }

  // |A|^2 = g^{ac} g^{bl} <P d_ab f, d_cl f>,  |H|^2 = g^{ab} g^{cl} <P d_ab f, d_cl f>
  T a2{}, h2{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int l = 0; l < 2; ++l) {
          const T pair = dot(cd.A[a][b], jet.d2f[c][l], n);
          a2 += cd.ginv[a][c] * cd.ginv[b][l] * pair;
          h2 += cd.ginv[a][b] * cd.ginv[c][l] * pair;
        }
  cd.normA2 = a2;
  cd.normH2 = h2;

  for (int m = 0; m < 2; ++m)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        T s{};
        for (int v = 0; v < 2; ++v) s += cd.ginv[m][v] * dot(jet.df[v], jet.d2f[a][b], n);
        cd.gamma[m][a][b] = s;
      }
  return cd;
}

// Levi-Civita connection of a 2x2 metric. dg[c][a][b] = d_c g_ab.
Christoffel christoffel(const Mat2<double>& g, const std::array<Mat2<double>, 2>& dg);

// First partials of the induced metric computed from the jet:
// d_c g_ab = <d_ca f, d_b f> + <d_a f, d_cb f>.
std::array<Mat2<double>, 2> metric_derivative(const Jet2& jet);

// Value of a scalar pointwise quantity together with its partial derivatives
// with respect to every jet slot d_a f^k and d_ab f^k (the two mixed
// second-derivative slots are treated as independent entries).
template <class T>
struct BasicSlotDerivative {
  T value{};
  std::array<VecN<T>, 2> d_df{};
  HessN<T> d_d2f{};
};
using SlotDerivative = BasicSlotDerivative<double>;

// d|A|^2 / d(d_m f) = -4 (G S G)^{mv} d_v f - 2 Gamma^m_ab A^{ab},  S_ac = g^{bl} <A_ab, A_cl>
// d|A|^2 / d(d_ab f) = 2 A^{ab}
template <class T>
BasicSlotDerivative<T> norm_a2_slots(const BasicJet2<T>& jet, const BasicCurvatureData<T>& cd) {
  using detail::dot;
  const int n = jet.dim;
  const auto& G = cd.ginv;
  BasicSlotDerivative<T> out;
  out.value = cd.normA2;

  HessN<T> raised{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < n; ++k) {
        T s{};
        for (int c = 0; c < 2; ++c)
          for (int l = 0; l < 2; ++l) s += G[a][c] * G[b][l] * cd.A[c][l][k];
        raised[a][b][k] = s;
      }

  Mat2<T> S{};
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) {
      T s{};
      for (int b = 0; b < 2; ++b)
        for (int l = 0; l < 2; ++l) s += G[b][l] * dot(cd.A[a][b], cd.A[c][l], n);
      S[a][c] = s;
    }
  Mat2<T> GSG{};
  for (int m = 0; m < 2; ++m)
    for (int v = 0; v < 2; ++v) {
      T s{};
      for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) s += G[m][a] * S[a][c] * G[c][v];
      GSG[m][v] = s;
    }

  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < n; ++k) {
      T s{};
      for (int v = 0; v < 2; ++v) s -= T(4.0) * GSG[m][v] * jet.df[v][k];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) s -= T(2.0) * cd.gamma[m][a][b] * raised[a][b][k];
      out.d_df[m][k] = s;
    }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < n; ++k) out.d_d2f[a][b][k] = T(2.0) * raised[a][b][k];
  return out;
}

// d|H|^2 / d(d_m f) = -4 (G K G)^{mv} d_v f - 2 g^{ab} Gamma^m_ab H,  K_ab = <H, A_ab>
// d|H|^2 / d(d_ab f) = 2 g^{ab} H
template <class T>
BasicSlotDerivative<T> norm_h2_slots(const BasicJet2<T>& jet, const BasicCurvatureData<T>& cd) {
  using detail::dot;
  const int n = jet.dim;
  const auto& G = cd.ginv;
  BasicSlotDerivative<T> out;
  out.value = cd.normH2;

  Mat2<T> K{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) K[a][b] = dot(cd.H, cd.A[a][b], n);
  Mat2<T> GKG{};
  for (int m = 0; m < 2; ++m)
    for (int v = 0; v < 2; ++v) {
      T s{};
      for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) s += G[m][a] * K[a][c] * G[c][v];
      GKG[m][v] = s;
    }
  std::array<T, 2> traced_gamma{};
  for (int m = 0; m < 2; ++m) {
    T s{};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) s += G[a][b] * cd.gamma[m][a][b];
    traced_gamma[m] = s;
  }

  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < n; ++k) {
      T s{};
      for (int v = 0; v < 2; ++v) s -= T(4.0) * GKG[m][v] * jet.df[v][k];
      s -= T(2.0) * traced_gamma[m] * cd.H[k];
      out.d_df[m][k] = s;
    }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < n; ++k) out.d_d2f[a][b][k] = T(2.0) * G[a][b] * cd.H[k];
  return out;
}

// d sqrt(det g) / d(d_m f) = sqrt(det g) g^{mv} d_v f; independent of D^2 f.
template <class T>
BasicSlotDerivative<T> sqrt_detg_slots(const BasicJet2<T>& jet, const BasicCurvatureData<T>& cd) {
  const int n = jet.dim;
  BasicSlotDerivative<T> out;
  out.value = cd.sqrtdetg;
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < n; ++k) {
      T s{};
      for (int v = 0; v < 2; ++v) s += cd.ginv[m][v] * jet.df[v][k];
      out.d_df[m][k] = cd.sqrtdetg * s;
    }
  return out;
}

enum class Functional { Ep, Wp };

// Pointwise integrand F = (1 + |A|^2)^{p/2} sqrt(det g)   (Ep)
//                    or (1 + |H|^2)^{p/2} sqrt(det g)     (Wp)
// with its slot derivatives. The energy is 1/4 of the integral of F.
template <class T>
BasicSlotDerivative<T> integrand_slots(const BasicJet2<T>& jet, const BasicCurvatureData<T>& cd,
                                       Functional functional, double p) {
  const int n = jet.dim;
  const auto curv = functional == Functional::Ep ? norm_a2_slots(jet, cd) : norm_h2_slots(jet, cd);
  const auto area = sqrt_detg_slots(jet, cd);
  const T base = T(1.0) + curv.value;
  const T lower = detail::power(base, 0.5 * p - 1.0);  // (1+|.|^2)^{(p-2)/2}
  const T full = lower * base;
  const T curv_factor = T(0.5 * p) * lower * cd.sqrtdetg;

  BasicSlotDerivative<T> out;
  out.value = full * cd.sqrtdetg;
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < n; ++k) out.d_df[m][k] = curv_factor * curv.d_df[m][k] + full * area.d_df[m][k];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < n; ++k) out.d_d2f[a][b][k] = curv_factor * curv.d_d2f[a][b][k];
  return out;
}

template <class T>
T integrand_value(const BasicCurvatureData<T>& cd, Functional functional, double p) {
  const T base = T(1.0) + (functional == Functional::Ep ? cd.normA2 : cd.normH2);
  return detail::power(base, 0.5 * p) * cd.sqrtdetg;
}

}  // namespace pcurv
