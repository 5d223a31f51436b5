#pragma once

#include <concepts>
#include <string>

#include "syz/fp.hpp"
#include "syz/rat.hpp"
#include "syz/rng.hpp"

namespace syz {

template <class K>
concept Field = requires(const K a, const K b, long long n, std::string s) {
    { K::zero() } -> std::convertible_to<K>;
    { K::one() } -> std::convertible_to<K>;
    { K::from_int(n) } -> std::convertible_to<K>;
    { K::parse(s) } -> std::convertible_to<K>;
    { a + b } -> std::convertible_to<K>;
    { a - b } -> std::convertible_to<K>;
    { a * b } -> std::convertible_to<K>;
    { a / b } -> std::convertible_to<K>;
    { -a } -> std::convertible_to<K>;
    { a.inv() } -> std::convertible_to<K>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a == b } -> std::convertible_to<bool>;
    { a < b } -> std::convertible_to<bool>;
    { a.str() } -> std::convertible_to<std::string>;
};

template <Field K>
std::string field_name();

template <>
inline std::string field_name<Fp>() { return "fp"; }
template <>
inline std::string field_name<Rat>() { return "rat"; }

// Uniform random element. Fp draws from the whole field; the rational mode
// draws small integers so random models stay cheap to eliminate.
template <Field K>
K random_scalar(Rng& rng);

template <>
inline Fp random_scalar<Fp>(Rng& rng) {
    return Fp(rng.below(Fp::modulus()));
}
template <>
inline Rat random_scalar<Rat>(Rng& rng) {
    return Rat::from_int(static_cast<long long>(rng.below(201)) - 100);
}

template <Field K>
K random_nonzero(Rng& rng) {
    for (;;) {
        K x = random_scalar<K>(rng);
        if (!x.is_zero())
            return x;
    }
}

// Integer power with negative exponents.
template <Field K>
K field_pow(const K& a, long long e) {
    if (e < 0)
        return field_pow(a.inv(), -e);
    K base = a, acc = K::one();
    while (e) {
        if (e & 1)
            acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

} // namespace syz
