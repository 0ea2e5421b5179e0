#pragma once

// Exact arithmetic substrate shared by every module: arbitrary-precision
// integers and rationals, generalized binomials, p-adic valuations and a
// tiny thread-pool knob. Everything here is total and exact; overflow is
// structurally impossible and divisions assert exactness where required.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace chevtrunc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int rat_den(const Rat& x) { return boost::multiprecision::denominator(x); }

inline bool is_integer(const Rat& x) { return rat_den(x) == 1; }

// Asserts x has no denominator and returns it as an Int.
inline Int to_int(const Rat& x) {
    if (!is_integer(x)) throw std::logic_error("expected integral rational, got " + x.str());
    return rat_num(x);
}

// binom(n, k) for arbitrary integer n and k >= 0, the polynomial
// n(n-1)...(n-k+1)/k!. Integer-valued for every integer n.
inline Int binom(const Int& n, long k) {
    if (k < 0) return 0;
    Int num = 1, den = 1;
    for (long j = 0; j < k; ++j) {
        num *= n - j;
        den *= j + 1;
    }
    Int q, r;
    boost::multiprecision::divide_qr(num, den, q, r);
    if (r != 0) throw std::logic_error("binom: non-exact division");
    return q;
}

inline Int factorial(long n) {
    Int f = 1;
    for (long j = 2; j <= n; ++j) f *= j;
    return f;
}

inline Int ipow(const Int& b, long e) {
    Int r = 1, x = b;
    for (long n = e; n > 0; n >>= 1) {
        if (n & 1) r *= x;
        if (n > 1) x *= x;
    }
    return r;
}

// p-adic valuation of x != 0; nullopt encodes v(0) = +infinity.
inline std::optional<long> vp(Int x, const Int& p) {
    if (x == 0) return std::nullopt;
    long v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

inline bool divides_pow(const Int& p, long e, const Int& x) {
    if (e <= 0) return true;
    return x % ipow(p, e) == 0;
}

// ceil(a/b) for b > 0, exact.
inline Int ceil_div(const Int& a, const Int& b) {
    Int q, r;
    boost::multiprecision::divide_qr(a, b, q, r);
    if (r != 0 && a > 0) ++q;
    return q;
}

// Congruence exponent p/(p-1)*r rounded up; evaluated in exact rationals so
// no float ever touches it.
inline long congruence_exponent(long p, long r) {
    Int num = Int(p) * r;
    Int den = Int(p) - 1;
    return static_cast<long>(ceil_div(num, den));
}

// Valuation of a nonzero rational at p.
inline long vp_rat(const Rat& x, const Int& p) {
    if (x == 0) throw std::invalid_argument("vp_rat: zero has no finite valuation");
    long vn = *vp(rat_num(x), p);
    long vd = *vp(rat_den(x), p);
    return vn - vd;
}

inline Int mod_reduce(const Int& x, const Int& m) {
    Int r = x % m;
    if (r < 0) r += m;
    return r;
}

// Inverse of x mod m for gcd(x, m) = 1.
inline Int mod_inverse(const Int& x, const Int& m) {
    Int a = mod_reduce(x, m), b = m;
    Int u0 = 1, u1 = 0;
    while (b != 0) {
        Int q = a / b;
        Int t = a - q * b; a = b; b = t;
        t = u0 - q * u1; u0 = u1; u1 = t;
    }
    if (a != 1) throw std::logic_error("mod_inverse: not a unit");
    return mod_reduce(u0, m);
}

// Reduction of a p-integral rational modulo a power of p: the denominator,
// coprime to p, is inverted modulo m.
inline Int rat_mod(const Rat& x, const Int& m, const Int& p) {
    if (x == 0) return 0;
    if (vp_rat(x, p) < 0) throw std::invalid_argument("rat_mod: not p-integral");
    Int num = mod_reduce(rat_num(x), m);
    Int den = rat_den(x);
    return mod_reduce(num * mod_inverse(mod_reduce(den, m), m), m);
}

// Worker count honoring CHEVTRUNC_THREADS; >= 1 always.
inline unsigned worker_count() {
    if (const char* s = std::getenv("CHEVTRUNC_THREADS")) {
        long n = std::strtol(s, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1u;
}

// Static chunked parallel map; degenerates to a plain loop for one worker.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
    unsigned w = worker_count();
    if (w <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> ts;
    ts.reserve(w);
    std::size_t chunk = (n + w - 1) / w;
    for (unsigned t = 0; t < w; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        ts.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : ts) t.join();
}

} // namespace chevtrunc
