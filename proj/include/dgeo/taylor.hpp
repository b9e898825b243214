#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace dgeo {

// Truncated Taylor expansion f(x0 + e) = sum_k c[k] e^k.
// Coefficients with index > order are not meaningful.
template <typename Scalar, int N>
struct Taylor {
  static_assert(N >= 1);
  static constexpr int max_order = N;

  std::array<Scalar, N + 1> c{};
  int order = N;

  static Taylor constant(Scalar v) {
    Taylor t;
    t.c[0] = v;
    return t;
  }

  static Taylor variable(Scalar x) {
    Taylor t;
    t.c[0] = x;
    t.c[1] = Scalar(1);
    return t;
  }

  Scalar value() const { return c[0]; }

  // k-th derivative at the expansion point.
  Scalar derivative(int k) const {
    Scalar f = Scalar(1);
    for (int i = 2; i <= k; ++i) f *= Scalar(i);
    return c[k] * f;
  }

  Taylor& operator+=(const Taylor& o) {
    for (int i = 0; i <= N; ++i) c[i] += o.c[i];
    order = std::min(order, o.order);
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (int i = 0; i <= N; ++i) c[i] -= o.c[i];
    order = std::min(order, o.order);
    return *this;
  }
  Taylor& operator+=(Scalar s) {
    c[0] += s;
    return *this;
  }
  Taylor& operator-=(Scalar s) {
    c[0] -= s;
    return *this;
  }
  Taylor& operator*=(Scalar s) {
    for (auto& x : c) x *= s;
    return *this;
  }
  Taylor& operator/=(Scalar s) {
    for (auto& x : c) x /= s;
    return *this;
  }
  Taylor operator-() const {
    Taylor t = *this;
    for (auto& x : t.c) x = -x;
    return t;
  }
};

template <typename S, int N>
Taylor<S, N> operator+(Taylor<S, N> a, const Taylor<S, N>& b) { return a += b; }
template <typename S, int N>
Taylor<S, N> operator-(Taylor<S, N> a, const Taylor<S, N>& b) { return a -= b; }
template <typename S, int N>
Taylor<S, N> operator+(Taylor<S, N> a, S b) { return a += b; }
template <typename S, int N>
Taylor<S, N> operator+(S b, Taylor<S, N> a) { return a += b; }
template <typename S, int N>
Taylor<S, N> operator-(Taylor<S, N> a, S b) { return a -= b; }
template <typename S, int N>
Taylor<S, N> operator-(S b, const Taylor<S, N>& a) { return (-a) += b; }
template <typename S, int N>
Taylor<S, N> operator*(Taylor<S, N> a, S b) { return a *= b; }
template <typename S, int N>
Taylor<S, N> operator*(S b, Taylor<S, N> a) { return a *= b; }
template <typename S, int N>
Taylor<S, N> operator/(Taylor<S, N> a, S b) { return a /= b; }

template <typename S, int N>
Taylor<S, N> operator*(const Taylor<S, N>& a, const Taylor<S, N>& b) {
  Taylor<S, N> r;
  r.order = std::min(a.order, b.order);
  for (int n = 0; n <= N; ++n) {
    S acc = S(0);
    for (int i = 0; i <= n; ++i) acc += a.c[i] * b.c[n - i];
    r.c[n] = acc;
  }
  // keep the value coefficient clean when higher terms are not finite
  r.c[0] = a.c[0] * b.c[0];
  return r;
}

// sum_k a[k] (x - x0)^k where x0 = x.c[0]. Only the value coefficient of the
// result is formed from a[0]; higher powers never touch index 0, so infinite
// coefficients at a boundary point cannot poison the value.
template <typename S, int N>
Taylor<S, N> compose(const std::array<S, N + 1>& a, int a_order,
                     const Taylor<S, N>& x) {
  Taylor<S, N> dx = x;
  dx.c[0] = S(0);
  Taylor<S, N> r;
  r.order = std::min(a_order, x.order);
  r.c[0] = a[0];
  bool zero = true;
  for (int i = 1; i <= N; ++i)
    if (dx.c[i] != S(0)) zero = false;
  if (zero) return r;
  Taylor<S, N> pw = dx;
  for (int k = 1; k <= N; ++k) {
    for (int j = k; j <= N; ++j) r.c[j] += a[k] * pw.c[j];
    if (k < N) {
      Taylor<S, N> next;
      for (int n = k + 1; n <= N; ++n) {
        S acc = S(0);
        for (int i = 1; i <= n - k; ++i) acc += dx.c[i] * pw.c[n - i];
        next.c[n] = acc;
      }
      pw = next;
    }
  }
  return r;
}

template <typename S, int N>
Taylor<S, N> exp(const Taylor<S, N>& x) {
  std::array<S, N + 1> a{};
  S e = std::exp(x.c[0]);
  S f = S(1);
  for (int k = 0; k <= N; ++k) {
    if (k > 0) f *= S(k);
    a[k] = e / f;
  }
  return compose(a, N, x);
}

template <typename S, int N>
Taylor<S, N> log(const Taylor<S, N>& x) {
  std::array<S, N + 1> a{};
  const S x0 = x.c[0];
  a[0] = std::log(x0);
  S p = S(1);
  for (int k = 1; k <= N; ++k) {
    p *= x0;
    a[k] = ((k % 2) ? S(1) : S(-1)) / (S(k) * p);
  }
  return compose(a, N, x);
}

// x^p for real p, x0 > 0
template <typename S, int N>
Taylor<S, N> pow(const Taylor<S, N>& x, S p) {
  std::array<S, N + 1> a{};
  const S x0 = x.c[0];
  S binom = S(1);
  for (int k = 0; k <= N; ++k) {
    if (k > 0) binom *= (p - S(k - 1)) / S(k);
    a[k] = binom * std::pow(x0, p - S(k));
  }
  return compose(a, N, x);
}

template <typename S, int N>
Taylor<S, N> reciprocal(const Taylor<S, N>& x) {
  std::array<S, N + 1> a{};
  const S x0 = x.c[0];
  S p = S(1) / x0;
  for (int k = 0; k <= N; ++k) {
    a[k] = (k % 2 ? -p : p);
    p /= x0;
  }
  return compose(a, N, x);
}

template <typename S, int N>
Taylor<S, N> operator/(const Taylor<S, N>& a, const Taylor<S, N>& b) {
  auto r = a * reciprocal(b);
  r.c[0] = a.c[0] / b.c[0];
  return r;
}

template <typename S, int N>
Taylor<S, N> operator/(S a, const Taylor<S, N>& b) {
  return reciprocal(b) * a;
}

template <typename S, int N>
Taylor<S, N> sqrt(const Taylor<S, N>& x) {
  return pow(x, S(0.5));
}

// Series of the derivative: f'(x0 + e) = sum_k (k+1) c[k+1] e^k.
template <typename S, int N>
Taylor<S, N> differentiate(const Taylor<S, N>& f) {
  Taylor<S, N> r;
  for (int k = 0; k < N; ++k) r.c[k] = S(k + 1) * f.c[k + 1];
  r.order = std::max(f.order - 1, 0);
  return r;
}

// Series of an antiderivative with value v0 at the expansion point.
template <typename S, int N>
Taylor<S, N> integrate(const Taylor<S, N>& f, S v0) {
  Taylor<S, N> r;
  r.c[0] = v0;
  for (int k = 1; k <= N; ++k) r.c[k] = f.c[k - 1] / S(k);
  r.order = std::min(f.order + 1, N);
  return r;
}

// Given the expansion of f around x0 (f.c[0] = y0), returns the expansion of
// the inverse around y0. Requires f.c[1] != 0.
template <typename S, int N>
Taylor<S, N> revert(const Taylor<S, N>& f, S x0) {
  const S a1 = f.c[1];
  std::array<S, N + 1> a{};
  for (int k = 1; k <= N; ++k) a[k] = f.c[k];
  Taylor<S, N> delta;
  delta.c[1] = S(1);
  Taylor<S, N> g;
  g.c[1] = S(1) / a1;
  for (int it = 1; it < N; ++it) {
    Taylor<S, N> fg = compose(a, N, g);
    Taylor<S, N> next = delta - (fg - g * a1);
    next /= a1;
    next.c[0] = S(0);
    g = next;
  }
  g.c[0] = x0;
  g.order = f.order;
  return g;
}

}  // namespace dgeo
