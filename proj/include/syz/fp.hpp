#pragma once

#include <cstdint>
#include <string>

#include "syz/errors.hpp"

namespace syz {

bool is_prime_u64(std::uint64_t n);

// Prime field element. The modulus is process-wide state, set once at startup
// (default 2^31 - 1) and read-only during computation; elements are plain
// values and safe to share across threads.
class Fp {
  public:
    Fp() : v_(0) {}
    explicit Fp(std::uint64_t reduced) : v_(reduced) {}

    static std::uint64_t modulus() { return mod_; }
    static void set_modulus(std::uint64_t p);

    static Fp from_int(long long n) {
        long long r = n % static_cast<long long>(mod_);
        if (r < 0)
            r += static_cast<long long>(mod_);
        return Fp(static_cast<std::uint64_t>(r));
    }
    static Fp zero() { return Fp(); }
    static Fp one() { return Fp(1 % mod_); }

    std::uint64_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    Fp operator+(Fp o) const {
        std::uint64_t s = v_ + o.v_;
        if (s >= mod_)
            s -= mod_;
        return Fp(s);
    }
    Fp operator-(Fp o) const {
        return Fp(v_ >= o.v_ ? v_ - o.v_ : v_ + mod_ - o.v_);
    }
    Fp operator-() const { return Fp(v_ == 0 ? 0 : mod_ - v_); }
    Fp operator*(Fp o) const {
        return Fp(static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(v_) * o.v_ % mod_));
    }
    Fp inv() const {
        if (v_ == 0)
            throw internal_error("Fp: inverse of zero");
        return pow(mod_ - 2);
    }
    Fp operator/(Fp o) const { return *this * o.inv(); }

    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    Fp& operator/=(Fp o) { return *this = *this / o; }

    bool operator==(const Fp&) const = default;
    bool operator<(Fp o) const { return v_ < o.v_; }

    Fp pow(std::uint64_t e) const {
        Fp base = *this, acc = one();
        while (e) {
            if (e & 1)
                acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    std::string str() const { return std::to_string(v_); }
    static Fp parse(const std::string& s);

  private:
    std::uint64_t v_;
    static std::uint64_t mod_;
};

// Scoped modulus switch for tests.
class FpModulusGuard {
  public:
    explicit FpModulusGuard(std::uint64_t p) : saved_(Fp::modulus()) {
        Fp::set_modulus(p);
    }
    ~FpModulusGuard() { Fp::set_modulus(saved_); }
    FpModulusGuard(const FpModulusGuard&) = delete;
    FpModulusGuard& operator=(const FpModulusGuard&) = delete;

  private:
    std::uint64_t saved_;
};

} // namespace syz
