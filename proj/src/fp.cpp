#include "syz/fp.hpp"

#include <stdexcept>

namespace syz {

std::uint64_t Fp::mod_ = 2147483647ULL; // 2^31 - 1

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t acc = 1 % m;
    a %= m;
    while (e) {
        if (e & 1)
            acc = mulmod(acc, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return acc;
}

} // namespace

// Deterministic Miller-Rabin; the listed bases decide primality for all
// 64-bit inputs.
bool is_prime_u64(std::uint64_t n) {
    if (n < 2)
        return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL,
                            19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL,
                            19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 0; i + 1 < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

void Fp::set_modulus(std::uint64_t p) {
    if (!is_prime_u64(p))
        throw std::invalid_argument("Fp: modulus " + std::to_string(p) +
                                    " is not prime");
    if (p >= (1ULL << 62))
        throw std::invalid_argument("Fp: modulus too large");
    mod_ = p;
}

Fp Fp::parse(const std::string& s) {
    if (s.empty())
        throw std::invalid_argument("Fp: empty literal");
    bool neg = s[0] == '-';
    std::uint64_t acc = 0;
    for (std::size_t i = neg ? 1 : 0; i < s.size(); ++i) {
        char c = s[i];
        if (c < '0' || c > '9')
            throw std::invalid_argument("Fp: bad literal '" + s + "'");
        acc = (mulmod(acc, 10, mod_) + static_cast<std::uint64_t>(c - '0')) % mod_;
    }
    Fp r(acc);
    return neg ? -r : r;
}

} // namespace syz
