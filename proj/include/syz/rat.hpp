#pragma once

#include <gmpxx.h>

#include <string>

#include "syz/errors.hpp"

namespace syz {

// Arbitrary-precision rational, always kept in lowest terms (gmp canonical
// form: positive denominator, gcd 1).
class Rat {
  public:
    Rat() : v_(0) {}
    explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    static Rat from_int(long long n) {
        Rat r;
        r.v_ = mpq_class(mpz_class(std::to_string(n)));
        return r;
    }
    static Rat zero() { return Rat(); }
    static Rat one() { return from_int(1); }

    bool is_zero() const { return sgn(v_) == 0; }

    Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_)); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_)); }
    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_)); }
    Rat inv() const {
        if (is_zero())
            throw internal_error("Rat: inverse of zero");
        return Rat(mpq_class(1 / v_));
    }
    Rat operator/(const Rat& o) const { return *this * o.inv(); }

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    bool operator==(const Rat& o) const { return cmp(v_, o.v_) == 0; }
    bool operator<(const Rat& o) const { return cmp(v_, o.v_) < 0; }

    std::string str() const { return v_.get_str(); }
    static Rat parse(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("Rat: bad literal '" + s + "'");
        q.canonicalize();
        return Rat(q);
    }

    const mpq_class& raw() const { return v_; }

  private:
    mpq_class v_;
};

} // namespace syz
