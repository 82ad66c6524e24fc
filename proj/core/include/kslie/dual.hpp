#pragma once

// Forward-mode dual numbers carrying a value and an N-component gradient.
// Used for exact first derivatives of the scalar fields and vector fields:
// differentials, Jacobians, Lie brackets and Newton steps all run on these
// instead of finite differences.

#include <array>
#include <cmath>
#include <cstddef>

namespace kslie {

template <std::size_t N>
struct Dual {
    double val = 0.0;
    std::array<double, N> grad{};

    Dual() = default;
    Dual(double v) : val(v) {}  // NOLINT: implicit constant lift is intended

    static Dual variable(double v, std::size_t index) {
        Dual d(v);
        d.grad[index] = 1.0;
        return d;
    }

    Dual operator-() const {
        Dual r(-val);
        for (std::size_t i = 0; i < N; ++i) r.grad[i] = -grad[i];
        return r;
    }

    Dual& operator+=(const Dual& o) {
        val += o.val;
        for (std::size_t i = 0; i < N; ++i) grad[i] += o.grad[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        val -= o.val;
        for (std::size_t i = 0; i < N; ++i) grad[i] -= o.grad[i];
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        for (std::size_t i = 0; i < N; ++i) grad[i] = grad[i] * o.val + val * o.grad[i];
        val *= o.val;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        const double inv = 1.0 / o.val;
        for (std::size_t i = 0; i < N; ++i) grad[i] = (grad[i] - val * inv * o.grad[i]) * inv;
        val *= inv;
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend Dual operator/(Dual a, const Dual& b) { return a /= b; }

    friend bool operator==(const Dual& a, const Dual& b) { return a.val == b.val; }
    friend auto operator<=>(const Dual& a, const Dual& b) { return a.val <=> b.val; }
};

// make the std overloads visible to unqualified calls in kslie templates,
// so the same code runs on double and on Dual<N>
using std::cos;
using std::exp;
using std::isfinite;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tanh;

template <std::size_t N>
Dual<N> chain(double f, double df, const Dual<N>& x) {
    Dual<N> r(f);
    for (std::size_t i = 0; i < N; ++i) r.grad[i] = df * x.grad[i];
    return r;
}

template <std::size_t N>
Dual<N> sin(const Dual<N>& x) { return chain(std::sin(x.val), std::cos(x.val), x); }
template <std::size_t N>
Dual<N> cos(const Dual<N>& x) { return chain(std::cos(x.val), -std::sin(x.val), x); }
template <std::size_t N>
Dual<N> exp(const Dual<N>& x) { const double e = std::exp(x.val); return chain(e, e, x); }
template <std::size_t N>
Dual<N> log(const Dual<N>& x) { return chain(std::log(x.val), 1.0 / x.val, x); }
template <std::size_t N>
Dual<N> sqrt(const Dual<N>& x) {
    const double s = std::sqrt(x.val);
    return chain(s, 0.5 / s, x);
}
template <std::size_t N>
Dual<N> tanh(const Dual<N>& x) {
    const double t = std::tanh(x.val);
    return chain(t, 1.0 - t * t, x);
}
// Exponent is a plain real; t-dependent exponents are not part of the grammar.
template <std::size_t N>
Dual<N> pow(const Dual<N>& x, double e) {
    return chain(std::pow(x.val, e), e * std::pow(x.val, e - 1.0), x);
}

template <std::size_t N>
bool isfinite(const Dual<N>& x) {
    if (!std::isfinite(x.val)) return false;
    for (double g : x.grad)
        if (!std::isfinite(g)) return false;
    return true;
}

using Jet5 = Dual<5>;

}  // namespace kslie
