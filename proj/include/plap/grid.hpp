#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace plap {

/// Raised when input data violates a shape or domain invariant.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Signed power |t|^(q-1) * t, with powq(0, q) = 0.
inline double powq(double t, double q) {
    if (t == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(t), q), t);
}

/**
 * GridFunction: a real function on Z[0, T+1] with homogeneous Dirichlet data.
 *
 * Storage covers the full index range 0..T+1; entries 0 and T+1 are pinned to
 * zero and no public operation can change them.
 */
class GridFunction {
public:
    GridFunction() = default;

    static GridFunction zero(int T) {
        check_T(T);
        GridFunction x;
        x.values_.assign(static_cast<std::size_t>(T) + 2, 0.0);
        return x;
    }

    /// Builds x from its interior values x(1..T).
    static GridFunction from_interior(std::span<const double> interior) {
        if (interior.empty()) throw InputError("grid function needs at least one interior node");
        GridFunction x = zero(static_cast<int>(interior.size()));
        std::copy(interior.begin(), interior.end(), x.values_.begin() + 1);
        return x;
    }

    /// Builds x from all T+2 values; the boundary entries must be exactly zero.
    static GridFunction from_full(std::span<const double> full) {
        if (full.size() < 3) throw InputError("grid function needs length T+2 with T >= 1");
        if (full.front() != 0.0 || full.back() != 0.0)
            throw InputError("grid function must vanish at k = 0 and k = T+1");
        GridFunction x;
        x.values_.assign(full.begin(), full.end());
        return x;
    }

    int T() const { return static_cast<int>(values_.size()) - 2; }
    double operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }
    std::span<const double> values() const { return values_; }
    std::span<const double> interior() const {
        return std::span<const double>(values_).subspan(1, values_.size() - 2);
    }
    std::vector<double> interior_vector() const {
        auto in = interior();
        return {in.begin(), in.end()};
    }

    /// Interior writes only; k must lie in 1..T.
    void set(int k, double v) {
        if (k < 1 || k > T()) throw InputError("interior index out of range: " + std::to_string(k));
        values_[static_cast<std::size_t>(k)] = v;
    }

    GridFunction& operator+=(const GridFunction& o) {
        same_shape(o);
        for (std::size_t i = 1; i + 1 < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    GridFunction& operator-=(const GridFunction& o) {
        same_shape(o);
        for (std::size_t i = 1; i + 1 < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    GridFunction& operator*=(double s) {
        for (std::size_t i = 1; i + 1 < values_.size(); ++i) values_[i] *= s;
        return *this;
    }

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(double s, GridFunction a) { return a *= s; }
    friend GridFunction operator*(GridFunction a, double s) { return a *= s; }
    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    static void check_T(int T) {
        if (T < 1) throw InputError("T must be a positive integer");
    }
    void same_shape(const GridFunction& o) const {
        if (o.values_.size() != values_.size()) throw InputError("grid functions have different T");
    }

    std::vector<double> values_;
};

namespace detail {

inline std::vector<double> broadcast_field(int T, std::span<const double> v, const char* name) {
    const auto n = static_cast<std::size_t>(T) + 2;
    if (T < 1) throw InputError("T must be a positive integer");
    if (v.size() == 1) return std::vector<double>(n, v[0]);
    if (v.size() != n)
        throw InputError(std::string(name) + " must have length T+2 = " + std::to_string(n) +
                         ", got " + std::to_string(v.size()));
    return {v.begin(), v.end()};
}

}  // namespace detail

/// Variable exponent p(k), k = 0..T+1, every entry > 1.
class ExponentField {
public:
    ExponentField(int T, std::span<const double> p) : p_(detail::broadcast_field(T, p, "p")) {
        for (std::size_t k = 0; k < p_.size(); ++k)
            if (!(p_[k] > 1.0))
                throw InputError("p must exceed 1 (p(" + std::to_string(k) + ") = " + std::to_string(p_[k]) + ")");
    }
    static ExponentField constant(int T, double p) { return ExponentField(T, std::span<const double>(&p, 1)); }

    int T() const { return static_cast<int>(p_.size()) - 2; }
    double operator[](int k) const { return p_[static_cast<std::size_t>(k)]; }
    std::span<const double> values() const { return p_; }
    // p- and p+ range over Z[0, T+1].
    double min() const { return *std::min_element(p_.begin(), p_.end()); }
    double max() const { return *std::max_element(p_.begin(), p_.end()); }

private:
    std::vector<double> p_;
};

/// Positive weight h(k), k = 0..T+1.
class WeightField {
public:
    WeightField(int T, std::span<const double> h) : h_(detail::broadcast_field(T, h, "h")) {
        for (std::size_t k = 0; k < h_.size(); ++k)
            if (!(h_[k] > 0.0))
                throw InputError("h must be positive (h(" + std::to_string(k) + ") = " + std::to_string(h_[k]) + ")");
    }
    static WeightField constant(int T, double h) { return WeightField(T, std::span<const double>(&h, 1)); }

    int T() const { return static_cast<int>(h_.size()) - 2; }
    double operator[](int k) const { return h_[static_cast<std::size_t>(k)]; }
    std::span<const double> values() const { return h_; }
    double min() const { return *std::min_element(h_.begin(), h_.end()); }
    double max() const { return *std::max_element(h_.begin(), h_.end()); }

    WeightField scaled(double s) const {
        std::vector<double> v = h_;
        for (double& e : v) e *= s;
        return WeightField(T(), v);
    }

private:
    std::vector<double> h_;
};

/// Parameter u(k), k = 1..T.
class ParameterFunction {
public:
    ParameterFunction(int T, std::span<const double> u) {
        if (T < 1) throw InputError("T must be a positive integer");
        if (u.size() == 1) {
            u_.assign(static_cast<std::size_t>(T), u[0]);
        } else if (u.size() == static_cast<std::size_t>(T)) {
            u_.assign(u.begin(), u.end());
        } else {
            throw InputError("u must have length T = " + std::to_string(T) + ", got " + std::to_string(u.size()));
        }
    }
    static ParameterFunction constant(int T, double c) { return ParameterFunction(T, std::span<const double>(&c, 1)); }

    int T() const { return static_cast<int>(u_.size()); }
    /// k in 1..T
    double operator[](int k) const { return u_[static_cast<std::size_t>(k - 1)]; }
    std::span<const double> values() const { return u_; }

    /// this + s * v
    ParameterFunction shifted(const ParameterFunction& v, double s) const {
        if (v.T() != T()) throw InputError("parameter functions have different T");
        std::vector<double> w = u_;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += s * v.u_[i];
        return ParameterFunction(T(), w);
    }

private:
    std::vector<double> u_;
};

/// Entry i (0-based) holds x(i+1) - x(i), i.e. Delta x(k-1) for k = i+1.
inline std::vector<double> forward_difference(const GridFunction& x) {
    auto v = x.values();
    std::vector<double> d(v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) d[i] = v[i + 1] - v[i];
    return d;
}

inline double h_norm(const GridFunction& x) {
    double s = 0.0;
    for (double d : forward_difference(x)) s += d * d;
    return std::sqrt(s);
}

inline double sup_norm(const GridFunction& x) {
    double m = 0.0;
    for (double v : x.interior()) m = std::max(m, std::abs(v));
    return m;
}

inline double h_distance(const GridFunction& x, const GridFunction& y) { return h_norm(x - y); }

/**
 * Summation-by-parts defect for a(0..T) against y in H:
 *
 *   sum_{k=1}^{T+1} a(k-1) Dy(k-1) + sum_{k=1}^{T} (a(k) - a(k-1)) y(k)
 *
 * which vanishes identically; it is the step that turns the weak form into
 * the pointwise equation.
 */
inline double summation_by_parts_defect(std::span<const double> a, const GridFunction& y) {
    const int T = y.T();
    if (a.size() != static_cast<std::size_t>(T) + 1)
        throw InputError("summation by parts: a must have length T+1 = " + std::to_string(T + 1) + ", got " +
                         std::to_string(a.size()));
    double weak = 0.0;
    for (int k = 1; k <= T + 1; ++k) weak += a[k - 1] * (y[k] - y[k - 1]);
    double correction = 0.0;
    for (int k = 1; k <= T; ++k) correction += (a[k] - a[k - 1]) * y[k];
    return weak + correction;
}

}  // namespace plap
