#pragma once

#include <optional>
#include <vector>

#include "syz/errors.hpp"
#include "syz/field.hpp"

namespace syz {

// Dense univariate polynomial, coefficients by ascending degree. The zero
// polynomial is the empty coefficient list; degree() of zero is -1.
template <Field K>
class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly constant(K a) { return Poly(std::vector<K>{a}); }
    static Poly monomial(int deg, K a = K::one()) {
        std::vector<K> c(static_cast<std::size_t>(deg) + 1, K::zero());
        c.back() = a;
        return Poly(std::move(c));
    }
    // t - a
    static Poly linear_root(K a) {
        return Poly(std::vector<K>{-a, K::one()});
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    K coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : K::zero();
    }
    const std::vector<K>& coeffs() const { return c_; }

    Poly operator+(const Poly& o) const {
        std::vector<K> r(std::max(c_.size(), o.c_.size()), K::zero());
        for (std::size_t i = 0; i < c_.size(); ++i)
            r[i] = r[i] + c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            r[i] = r[i] + o.c_[i];
        return Poly(std::move(r));
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator-() const {
        std::vector<K> r(c_);
        for (auto& x : r)
            x = -x;
        return Poly(std::move(r));
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero())
            return Poly();
        std::vector<K> r(c_.size() + o.c_.size() - 1, K::zero());
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                r[i + j] = r[i + j] + c_[i] * o.c_[j];
        return Poly(std::move(r));
    }
    Poly operator*(const K& a) const {
        if (a.is_zero())
            return Poly();
        std::vector<K> r(c_);
        for (auto& x : r)
            x = x * a;
        return Poly(std::move(r));
    }

    bool operator==(const Poly& o) const { return c_ == o.c_; }

    K eval(const K& x) const {
        K acc = K::zero();
        for (std::size_t i = c_.size(); i-- > 0;)
            acc = acc * x + c_[i];
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1)
            return Poly();
        std::vector<K> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            r[i - 1] = c_[i] * K::from_int(static_cast<long long>(i));
        return Poly(std::move(r));
    }

    // Taylor coefficients at x: p(t) = sum shifted[i] (t-x)^i. Repeated
    // synthetic division; exact in any characteristic.
    std::vector<K> taylor_at(const K& x, int nterms) const {
        std::vector<K> work(c_);
        std::vector<K> out;
        out.reserve(static_cast<std::size_t>(nterms));
        for (int k = 0; k < nterms; ++k) {
            if (work.empty()) {
                out.push_back(K::zero());
                continue;
            }
            // divide by (t - x): remainder = value, quotient in place
            K rem = K::zero();
            for (std::size_t i = work.size(); i-- > 0;) {
                K q = work[i] + rem * x;
                rem = q;
                work[i] = q;
            }
            out.push_back(rem);
            work.erase(work.begin());
        }
        return out;
    }

    // Quotient if (t - x)^e divides exactly.
    std::optional<Poly> div_linear_power(const K& x, int e) const {
        Poly q = *this;
        for (int k = 0; k < e; ++k) {
            if (q.is_zero())
                return q;
            std::vector<K> w(q.c_);
            K rem = K::zero();
            for (std::size_t i = w.size(); i-- > 0;) {
                K v = w[i] + rem * x;
                rem = v;
                w[i] = v;
            }
            if (!rem.is_zero())
                return std::nullopt;
            w.erase(w.begin());
            q = Poly(std::move(w));
        }
        return q;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero())
            c_.pop_back();
    }
    std::vector<K> c_;
};

// First nterms of the multiplicative inverse of a power series (a[0] != 0).
template <Field K>
std::vector<K> series_inverse(const std::vector<K>& a, int nterms) {
    if (a.empty() || a[0].is_zero())
        throw internal_error("series_inverse: non-unit constant term");
    std::vector<K> b(static_cast<std::size_t>(nterms), K::zero());
    K inv0 = a[0].inv();
    b[0] = inv0;
    for (int k = 1; k < nterms; ++k) {
        K s = K::zero();
        for (int i = 1; i <= k; ++i) {
            K ai = i < static_cast<int>(a.size()) ? a[i] : K::zero();
            s = s + ai * b[static_cast<std::size_t>(k - i)];
        }
        b[static_cast<std::size_t>(k)] = -s * inv0;
    }
    return b;
}

// quotient and remainder of a by b (b nonzero)
template <Field K>
std::pair<Poly<K>, Poly<K>> poly_divmod(const Poly<K>& a, const Poly<K>& b) {
    if (b.is_zero())
        throw internal_error("poly_divmod: division by zero");
    Poly<K> r = a;
    Poly<K> q;
    const K lead_inv = b.coeff(b.degree()).inv();
    while (!r.is_zero() && r.degree() >= b.degree()) {
        K c = r.coeff(r.degree()) * lead_inv;
        int shift = r.degree() - b.degree();
        Poly<K> term = Poly<K>::monomial(shift, c);
        q = q + term;
        r = r - b * term;
    }
    return {q, r};
}

template <Field K>
Poly<K> poly_divexact(const Poly<K>& a, const Poly<K>& b) {
    auto [q, r] = poly_divmod(a, b);
    if (!r.is_zero())
        throw internal_error("poly_divexact: inexact division");
    return q;
}

template <Field K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
    while (!b.is_zero()) {
        // remainder of a by b
        Poly<K> r = a;
        while (!r.is_zero() && r.degree() >= b.degree()) {
            K q = r.coeff(r.degree()) / b.coeff(b.degree());
            int shift = r.degree() - b.degree();
            r = r - b * Poly<K>::monomial(shift, q);
        }
        a = b;
        b = r;
    }
    if (!a.is_zero())
        a = a * a.coeff(a.degree()).inv();
    return a;
}

} // namespace syz
