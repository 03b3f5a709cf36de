/*
 Copyright 2026 The optload Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef OPTLOAD_DUAL_HPP
#define OPTLOAD_DUAL_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace optload {

/**
 * @brief Forward-mode dual number with a dynamic number of partials.
 *
 * The scalar type T may itself be a Dual, which is how second (and third)
 * derivatives are obtained: a Dual<Dual<double>> seeded on k variables carries
 * the value, the gradient and the Hessian. An empty partials vector stands for
 * an all-zero gradient so constants and inactive variables cost no allocation.
 */
template <class T>
struct Dual {
    T v{};
    std::vector<T> d;

    Dual() = default;
    Dual(double c) : v(c) {}  // NOLINT(google-explicit-constructor)
    Dual(T value, std::vector<T> partials) : v(std::move(value)), d(std::move(partials)) {}

    std::size_t size() const { return d.size(); }
    const T& partial(std::size_t i) const {
        static const T zero{};
        return i < d.size() ? d[i] : zero;
    }
};

/// Innermost real value of a possibly nested dual.
inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) {
    return primal(x.v);
}

namespace detail {

template <class T, class Op>
std::vector<T> zip_partials(const std::vector<T>& a, const std::vector<T>& b, Op op) {
    const std::size_t k = a.size() > b.size() ? a.size() : b.size();
    std::vector<T> out;
    if (k == 0) return out;
    out.reserve(k);
    static const T zero{};
    for (std::size_t i = 0; i < k; ++i) {
        out.push_back(op(i < a.size() ? a[i] : zero, i < b.size() ? b[i] : zero));
    }
    return out;
}

template <class T>
std::vector<T> scale_partials(const std::vector<T>& a, const T& s) {
    std::vector<T> out;
    out.reserve(a.size());
    for (const auto& ai : a) out.push_back(s * ai);
    return out;
}

/// Chain rule for a unary function with value fx and derivative dfx.
template <class T>
Dual<T> chain(const Dual<T>& x, T fx, const T& dfx) {
    return Dual<T>(std::move(fx), scale_partials(x.d, dfx));
}

}  // namespace detail

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
    return Dual<T>(a.v + b.v,
                   detail::zip_partials(a.d, b.d, [](const T& x, const T& y) { return x + y; }));
}

template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
    return Dual<T>(a.v - b.v,
                   detail::zip_partials(a.d, b.d, [](const T& x, const T& y) { return x - y; }));
}

template <class T>
Dual<T> operator-(const Dual<T>& a) {
    std::vector<T> d;
    d.reserve(a.d.size());
    for (const auto& ai : a.d) d.push_back(-ai);
    return Dual<T>(-a.v, std::move(d));
}

template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    if (a.d.empty()) return Dual<T>(a.v * b.v, detail::scale_partials(b.d, a.v));
    if (b.d.empty()) return Dual<T>(a.v * b.v, detail::scale_partials(a.d, b.v));
    return Dual<T>(a.v * b.v, detail::zip_partials(a.d, b.d, [&](const T& x, const T& y) {
                       return x * b.v + a.v * y;
                   }));
}

template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    T q = a.v / b.v;
    if (b.d.empty()) {
        std::vector<T> d;
        d.reserve(a.d.size());
        for (const auto& ai : a.d) d.push_back(ai / b.v);
        return Dual<T>(std::move(q), std::move(d));
    }
    auto d = detail::zip_partials(a.d, b.d, [&](const T& x, const T& y) { return (x - q * y) / b.v; });
    return Dual<T>(std::move(q), std::move(d));
}

template <class T>
Dual<T> operator+(const Dual<T>& a, double b) { return a + Dual<T>(b); }
template <class T>
Dual<T> operator+(double a, const Dual<T>& b) { return Dual<T>(a) + b; }
template <class T>
Dual<T> operator-(const Dual<T>& a, double b) { return a - Dual<T>(b); }
template <class T>
Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a) - b; }
template <class T>
Dual<T> operator*(const Dual<T>& a, double b) { return a * Dual<T>(b); }
template <class T>
Dual<T> operator*(double a, const Dual<T>& b) { return Dual<T>(a) * b; }
template <class T>
Dual<T> operator/(const Dual<T>& a, double b) { return a / Dual<T>(b); }
template <class T>
Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

template <class T>
Dual<T> sin(const Dual<T>& x) {
    using std::cos;
    using std::sin;
    return detail::chain(x, T(sin(x.v)), T(cos(x.v)));
}

template <class T>
Dual<T> cos(const Dual<T>& x) {
    using std::cos;
    using std::sin;
    return detail::chain(x, T(cos(x.v)), T(-sin(x.v)));
}

template <class T>
Dual<T> tanh(const Dual<T>& x) {
    using std::tanh;
    T t = tanh(x.v);
    T dt = 1.0 - t * t;
    return detail::chain(x, std::move(t), dt);
}

template <class T>
Dual<T> exp(const Dual<T>& x) {
    using std::exp;
    T e = exp(x.v);
    T de = e;
    return detail::chain(x, std::move(e), de);
}

template <class T>
Dual<T> log(const Dual<T>& x) {
    using std::log;
    return detail::chain(x, T(log(x.v)), T(1.0 / x.v));
}

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
    using std::sqrt;
    T s = sqrt(x.v);
    T ds = 0.5 / s;
    return detail::chain(x, std::move(s), ds);
}

/// x^c for a constant exponent c; pow(x, 0) is the constant 1.
template <class T>
Dual<T> pow(const Dual<T>& x, double c) {
    using std::pow;
    if (c == 0.0) return Dual<T>(1.0);
    return detail::chain(x, T(pow(x.v, c)), T(c * pow(x.v, c - 1.0)));
}

using Dual1 = Dual<double>;
using Dual2Scalar = Dual<Dual<double>>;

/// Seeds variable `index` of `count` for first-order differentiation.
inline Dual1 seed_first(double value, std::size_t index, std::size_t count) {
    std::vector<double> d(count, 0.0);
    d[index] = 1.0;
    return Dual1(value, std::move(d));
}

/// Seeds variable `index` of `count` for second-order differentiation.
inline Dual2Scalar seed_second(double value, std::size_t index, std::size_t count) {
    std::vector<Dual1> outer(count);
    outer[index] = Dual1(1.0);
    return Dual2Scalar(seed_first(value, index, count), std::move(outer));
}

/// Seeds variable `index` of `count` for second order over an inner scalar type
/// (e.g. Dual1 carrying a directional derivative).
template <class S>
Dual<Dual<S>> seed_second_over(S value, std::size_t index, std::size_t count) {
    std::vector<S> inner(count);
    inner[index] = S(1.0);
    std::vector<Dual<S>> outer(count);
    outer[index] = Dual<S>(S(1.0), {});
    return Dual<Dual<S>>(Dual<S>(std::move(value), std::move(inner)), std::move(outer));
}

}  // namespace optload

#endif  // OPTLOAD_DUAL_HPP
