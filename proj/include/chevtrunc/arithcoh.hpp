#pragma once

// Arithmetic side: principal congruence subgroups of SL2(Z), symmetric-power
// coefficient modules, the U_p operator on parabolic 1-cocycles, and the
// comparison between small Hecke slopes and the size of truncated cohomology.

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "chevtrunc/common.hpp"
#include "chevtrunc/linalg.hpp"
#include "chevtrunc/hwmod.hpp"
#include "chevtrunc/trunc.hpp"
#include "chevtrunc/slopes.hpp"

namespace chevtrunc {

// ---- 2x2 integer matrices --------------------------------------------------

struct M2 {
    Int a{0}, b{0}, c{0}, d{0};

    bool operator==(const M2& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    bool operator!=(const M2& o) const { return !(*this == o); }
};

inline M2 m2_identity() { return M2{1, 0, 0, 1}; }

inline M2 m2_mul(const M2& x, const M2& y) {
    return M2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
              x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Int m2_det(const M2& x) { return x.a * x.d - x.b * x.c; }

inline M2 m2_neg(const M2& x) { return M2{-x.a, -x.b, -x.c, -x.d}; }

// Inverse of a determinant-one matrix.
inline M2 m2_inv(const M2& x) {
    if (m2_det(x) != 1) throw std::invalid_argument("m2_inv: determinant must be 1");
    return M2{x.d, -x.b, -x.c, x.a};
}

inline std::string m2_str(const M2& x) {
    return "[[" + x.a.str() + "," + x.b.str() + "],[" + x.c.str() + "," + x.d.str() + "]]";
}

// Membership in the congruence group: determinant one, both diagonal entries
// 1 mod p, lower-left entry 0 mod p. The determinant condition then forces
// the upper-right entry to be unconstrained mod p.
inline bool gamma_membership(const M2& g, const Int& p) {
    if (m2_det(g) != 1) throw std::invalid_argument("gamma_membership: determinant must be 1");
    return mod_reduce(g.a - 1, p) == 0 && mod_reduce(g.d - 1, p) == 0 &&
           mod_reduce(g.c, p) == 0;
}

// The local-at-p version of the same condition, stated for integer matrices:
// identical predicate.
inline bool kstar_membership(const M2& g, const Int& p) { return gamma_membership(g, p); }

// ---- weights of the reductive group ----------------------------------------

// A dominant weight (k, m): k is the symmetric-power degree on the derived
// group, m the twist exponent on the similitude factor. The central character
// sends diag(a, d) to a^m d^(k+m).
struct ReductiveWeight {
    long k = 0;
    long m = 0;
};

inline Rat rat_pow(const Rat& base, long e) {
    if (e < 0) {
        if (base == 0) throw std::invalid_argument("rat_pow: zero base, negative exponent");
        return rat_pow(Rat(1) / base, -e);
    }
    Rat r = 1, b = base;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline Rat weight_character(const ReductiveWeight& w, const Rat& a, const Rat& d) {
    return rat_pow(a, w.m) * rat_pow(d, w.k + w.m);
}

// ---- symmetric-power matrices ----------------------------------------------

// Degree-k symmetric power in the divided basis v_j = C(k,j) x^j y^(k-j),
// j = 0..k (v_0 = y^k highest, height of v_j is j). The group acts by
// g.x = a x + c y, g.y = b x + d y, so the matrix entry is
//   M[i][j] = C(k,j)/C(k,i) * sum_s C(j,s) C(k-j, i-s) a^s c^(j-s) b^(i-s) d^(k-j-i+s).
inline Mat<Rat> sym_divided_rat(const Rat& a, const Rat& b, const Rat& c, const Rat& d, long k) {
    if (k < 0) throw std::invalid_argument("sym_divided_rat: negative degree");
    std::size_t n = static_cast<std::size_t>(k) + 1;
    // pa[s] = C(j,s) a^s c^(j-s) depends on column j; precompute raw powers.
    std::vector<Rat> ap(n), bp(n), cp(n), dp(n);
    ap[0] = bp[0] = cp[0] = dp[0] = 1;
    for (std::size_t i = 1; i < n; ++i) {
        ap[i] = ap[i - 1] * a;
        bp[i] = bp[i - 1] * b;
        cp[i] = cp[i - 1] * c;
        dp[i] = dp[i - 1] * d;
    }
    Mat<Rat> m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            Rat acc = 0;
            std::size_t slo = (i + j >= static_cast<std::size_t>(k)) ? i + j - k : 0;
            std::size_t shi = std::min(i, j);
            for (std::size_t s = slo; s <= shi; ++s) {
                acc += Rat(binom(Int(j), static_cast<long>(s))) *
                       Rat(binom(Int(k - j), static_cast<long>(i - s))) *
                       ap[s] * cp[j - s] * bp[i - s] * dp[k - j - (i - s)];
            }
            m(i, j) = acc * Rat(binom(Int(k), static_cast<long>(j))) /
                      Rat(binom(Int(k), static_cast<long>(i)));
        }
    }
    return m;
}

// Integer-matrix specialization in the same divided basis. The division by
// C(k,i) must be exact; a failure means the input does not preserve the
// divided lattice and is a hard error.
inline Mat<Int> sym_divided_int(const M2& g, long k) {
    if (k < 0) throw std::invalid_argument("sym_divided_int: negative degree");
    std::size_t n = static_cast<std::size_t>(k) + 1;
    std::vector<Int> ap(n), bp(n), cp(n), dp(n);
    ap[0] = bp[0] = cp[0] = dp[0] = 1;
    for (std::size_t i = 1; i < n; ++i) {
        ap[i] = ap[i - 1] * g.a;
        bp[i] = bp[i - 1] * g.b;
        cp[i] = cp[i - 1] * g.c;
        dp[i] = dp[i - 1] * g.d;
    }
    Mat<Int> m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Int cj = binom(Int(k), static_cast<long>(j));
        for (std::size_t i = 0; i < n; ++i) {
            Int acc = 0;
            std::size_t slo = (i + j >= static_cast<std::size_t>(k)) ? i + j - k : 0;
            std::size_t shi = std::min(i, j);
            for (std::size_t s = slo; s <= shi; ++s) {
                acc += binom(Int(j), static_cast<long>(s)) *
                       binom(Int(k - j), static_cast<long>(i - s)) *
                       ap[s] * cp[j - s] * bp[i - s] * dp[k - j - (i - s)];
            }
            Int num = acc * cj;
            Int den = binom(Int(k), static_cast<long>(i));
            if (num % den != 0)
                throw std::logic_error("sym_divided_int: lattice not preserved at degree " +
                                       std::to_string(k));
            m(i, j) = num / den;
        }
    }
    return m;
}

// Plain monomial basis w_i = x^i y^(k-i): a pure convolution with no binomial
// division, hence valid entrywise modulo any modulus. Conjugate to the divided
// basis by diag(C(k,i)).
inline Mat<Int> sym_plain_mod(const M2& g, long k, const Int& modulus) {
    if (k < 0) throw std::invalid_argument("sym_plain_mod: negative degree");
    if (modulus < 2) throw std::invalid_argument("sym_plain_mod: modulus must be >= 2");
    std::size_t n = static_cast<std::size_t>(k) + 1;
    std::vector<Int> ap(n), bp(n), cp(n), dp(n);
    ap[0] = bp[0] = cp[0] = dp[0] = 1;
    Int ra = mod_reduce(g.a, modulus), rb = mod_reduce(g.b, modulus);
    Int rc = mod_reduce(g.c, modulus), rd = mod_reduce(g.d, modulus);
    for (std::size_t i = 1; i < n; ++i) {
        ap[i] = ap[i - 1] * ra % modulus;
        bp[i] = bp[i - 1] * rb % modulus;
        cp[i] = cp[i - 1] * rc % modulus;
        dp[i] = dp[i - 1] * rd % modulus;
    }
    // Binomial table mod modulus via Pascal's rule (no division anywhere).
    std::vector<std::vector<Int>> ch(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        ch[i][0] = 1;
        for (std::size_t t = 1; t <= i; ++t)
            ch[i][t] = (ch[i - 1][t - 1] + (t <= i - 1 ? ch[i - 1][t] : 0)) % modulus;
    }
    Mat<Int> m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            Int acc = 0;
            std::size_t slo = (i + j >= static_cast<std::size_t>(k)) ? i + j - k : 0;
            std::size_t shi = std::min(i, j);
            for (std::size_t s = slo; s <= shi; ++s) {
                acc += ch[j][s] * ch[k - j][i - s] % modulus *
                       (ap[s] * cp[j - s] % modulus) % modulus *
                       (bp[i - s] * dp[k - j - (i - s)] % modulus) % modulus;
            }
            m(i, j) = acc % modulus;
        }
    }
    return m;
}

// Exact plain-basis matrix, used to cross-check the conjugation relation
// between the two bases.
inline Mat<Int> sym_plain_int(const M2& g, long k) {
    if (k < 0) throw std::invalid_argument("sym_plain_int: negative degree");
    std::size_t n = static_cast<std::size_t>(k) + 1;
    std::vector<Int> ap(n), bp(n), cp(n), dp(n);
    ap[0] = bp[0] = cp[0] = dp[0] = 1;
    for (std::size_t i = 1; i < n; ++i) {
        ap[i] = ap[i - 1] * g.a;
        bp[i] = bp[i - 1] * g.b;
        cp[i] = cp[i - 1] * g.c;
        dp[i] = dp[i - 1] * g.d;
    }
    Mat<Int> m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            Int acc = 0;
            std::size_t slo = (i + j >= static_cast<std::size_t>(k)) ? i + j - k : 0;
            std::size_t shi = std::min(i, j);
            for (std::size_t s = slo; s <= shi; ++s) {
                acc += binom(Int(j), static_cast<long>(s)) *
                       binom(Int(k - j), static_cast<long>(i - s)) *
                       ap[s] * cp[j - s] * bp[i - s] * dp[k - j - (i - s)];
            }
            m(i, j) = acc;
        }
    }
    return m;
}

// ---- free generators of the congruence group --------------------------------

// The congruence group of prime level p (p >= 5) is free; its rank is
// 1 + (p^2 - 1)/12. Generators are produced by a Schreier transversal for the
// image in PSL2(F_p) under the standard order-4 / order-6 generating pair.
struct BasisLetter {
    std::size_t gen = 0;
    int sign = +1;  // +1 for the generator, -1 for its inverse

    bool operator==(const BasisLetter& o) const { return gen == o.gen && sign == o.sign; }
};

class CongruenceGroup {
  public:
    // Builds the internal coset tables and a free basis. Supported prime
    // levels keep the coset space (p^2-1)/2 small.
    static CongruenceGroup free_generators(long p);

    // Reads one generator per line ("a b c d", '#' comments allowed) and
    // validates membership and the expected count. The result carries no
    // coset tables, so it supports matrix-level computations only.
    static CongruenceGroup from_file(long p, const std::string& path);

    const Int& level() const { return p_; }
    const std::vector<M2>& gens() const { return gens_; }
    bool has_tables() const { return has_tables_; }
    std::size_t coset_count() const { return step_.size(); }

    // Expresses a group element as a word in the free basis; the returned
    // letters multiply left to right to the input matrix exactly.
    std::vector<BasisLetter> rewrite(const M2& g) const;

  private:
    Int p_{0};
    std::vector<M2> gens_;
    bool has_tables_ = false;

    // Coset tables for the two projective letters (0 = order-4, 1 = order-6).
    std::vector<std::array<long, 2>> step_;
    std::vector<std::vector<BasisLetter>> expand_[2];
    std::vector<M2> transversal_;

    static M2 smat() { return M2{0, -1, 1, 0}; }
    static M2 umat() { return M2{0, -1, 1, 1}; }

    M2 raw_edge(long i, int x) const {
        M2 letter = (x == 0) ? smat() : umat();
        return m2_mul(m2_mul(transversal_[static_cast<std::size_t>(i)], letter),
                      m2_inv(transversal_[static_cast<std::size_t>(step_[static_cast<std::size_t>(i)][x])]));
    }

    // Exactly one of +-g lies in the group (the group has a = 1 mod p and
    // p > 2, so -1 is not 1).
    M2 sign_normalize(const M2& g) const {
        if (gamma_membership(g, p_)) return g;
        M2 h = m2_neg(g);
        if (gamma_membership(h, p_)) return h;
        throw std::logic_error("sign_normalize: matrix not in the group up to sign");
    }

    static bool is_pm_identity(const M2& g) {
        return g == m2_identity() || g == m2_neg(m2_identity());
    }
};

inline CongruenceGroup CongruenceGroup::free_generators(long p) {
    if (p != 5 && p != 7 && p != 11 && p != 13)
        throw std::invalid_argument("free_generators: supported prime levels are 5, 7, 11, 13");
    CongruenceGroup grp;
    grp.p_ = p;
    grp.has_tables_ = true;

    // Cosets of the image subgroup in PSL2(F_p), labelled by the bottom row
    // (c, d) up to global sign, acted on the right.
    auto canon = [p](long c, long d) {
        c = ((c % p) + p) % p;
        d = ((d % p) + p) % p;
        long c2 = (p - c) % p, d2 = (p - d) % p;
        if (std::pair(c2, d2) < std::pair(c, d)) return std::pair(c2, d2);
        return std::pair(c, d);
    };
    auto act = [p, &canon](std::pair<long, long> cd, const M2& x) {
        long a = static_cast<long>(x.a % p), b = static_cast<long>(x.b % p);
        long c = static_cast<long>(x.c % p), d = static_cast<long>(x.d % p);
        return canon(cd.first * a + cd.second * c, cd.first * b + cd.second * d);
    };

    std::map<std::pair<long, long>, long> index;
    std::vector<std::pair<long, long>> labels;
    auto intern = [&](std::pair<long, long> cd) {
        auto it = index.find(cd);
        if (it != index.end()) return it->second;
        long id = static_cast<long>(labels.size());
        index.emplace(cd, id);
        labels.push_back(cd);
        return id;
    };

    const M2 letters[2] = {smat(), umat()};
    intern(canon(0, 1));
    grp.transversal_.push_back(m2_identity());
    grp.step_.push_back({-1, -1});
    for (std::size_t head = 0; head < labels.size(); ++head) {
        for (int x = 0; x < 2; ++x) {
            auto nxt = act(labels[head], letters[x]);
            long before = static_cast<long>(labels.size());
            long id = intern(nxt);
            grp.step_[head][x] = id;
            if (id == before) {
                grp.transversal_.push_back(m2_mul(grp.transversal_[head], letters[x]));
                grp.step_.push_back({-1, -1});
            }
        }
    }
    long n = static_cast<long>(labels.size());
    if (n != (p * p - 1) / 2)
        throw std::logic_error("free_generators: coset count mismatch");

    grp.expand_[0].assign(static_cast<std::size_t>(n), {});
    grp.expand_[1].assign(static_cast<std::size_t>(n), {});

    auto add_gen = [&grp](const M2& g) {
        grp.gens_.push_back(g);
        return grp.gens_.size() - 1;
    };

    // Order-4 letter: free pairing of cosets; each 2-cycle {i, j} with a
    // nontrivial Schreier element contributes one generator.
    for (long i = 0; i < n; ++i) {
        long j = grp.step_[static_cast<std::size_t>(i)][0];
        if (j == i)
            throw std::logic_error("free_generators: unexpected fixed coset under the order-4 letter");
        if (i > j) continue;
        M2 raw = grp.raw_edge(i, 0);
        if (is_pm_identity(raw)) continue;
        std::size_t id = add_gen(grp.sign_normalize(raw));
        grp.expand_[0][static_cast<std::size_t>(i)] = {BasisLetter{id, +1}};
        grp.expand_[0][static_cast<std::size_t>(j)] = {BasisLetter{id, -1}};
    }

    // Order-6 letter: free 3-cycles {i0, i1, i2}; the three edge elements
    // multiply to the central involution, so either none, two, or all three
    // are nontrivial mod +-1.
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (long i0 = 0; i0 < n; ++i0) {
        if (seen[static_cast<std::size_t>(i0)]) continue;
        long i1 = grp.step_[static_cast<std::size_t>(i0)][1];
        long i2 = grp.step_[static_cast<std::size_t>(i1)][1];
        if (grp.step_[static_cast<std::size_t>(i2)][1] != i0 || i0 == i1 || i1 == i2 || i0 == i2)
            throw std::logic_error("free_generators: order-6 letter orbit is not a 3-cycle");
        seen[static_cast<std::size_t>(i0)] = seen[static_cast<std::size_t>(i1)] =
            seen[static_cast<std::size_t>(i2)] = 1;
        long orb[3] = {i0, i1, i2};
        M2 raw[3] = {grp.raw_edge(i0, 1), grp.raw_edge(i1, 1), grp.raw_edge(i2, 1)};
        bool triv[3];
        int nontrivial = 0;
        for (int t = 0; t < 3; ++t) {
            triv[t] = is_pm_identity(raw[t]);
            if (!triv[t]) ++nontrivial;
        }
        if (nontrivial == 0) continue;
        if (nontrivial == 1)
            throw std::logic_error("free_generators: single nontrivial edge in a 3-cycle");
        if (nontrivial == 2) {
            int q = triv[0] ? 0 : (triv[1] ? 1 : 2);  // the trivial slot
            int t = (q + 1) % 3, t2 = (q + 2) % 3;
            // raw[t] * raw[t2] is central, so the two edges carry one
            // generator and its inverse.
            std::size_t id = add_gen(grp.sign_normalize(raw[t]));
            grp.expand_[1][static_cast<std::size_t>(orb[t])] = {BasisLetter{id, +1}};
            grp.expand_[1][static_cast<std::size_t>(orb[t2])] = {BasisLetter{id, -1}};
        } else {
            std::size_t ia = add_gen(grp.sign_normalize(raw[0]));
            std::size_t ib = add_gen(grp.sign_normalize(raw[1]));
            grp.expand_[1][static_cast<std::size_t>(orb[0])] = {BasisLetter{ia, +1}};
            grp.expand_[1][static_cast<std::size_t>(orb[1])] = {BasisLetter{ib, +1}};
            // raw[2] = (raw[0] raw[1])^(-1) up to the central sign.
            grp.expand_[1][static_cast<std::size_t>(orb[2])] = {BasisLetter{ib, -1},
                                                                BasisLetter{ia, -1}};
        }
    }

    if (grp.gens_.size() != static_cast<std::size_t>(1 + (p * p - 1) / 12))
        throw std::logic_error("free_generators: rank mismatch");

    // Universal check: every Schreier edge equals the product of its
    // expansion letters. Two group elements equal up to sign are equal
    // exactly, since both have upper-left entry 1 mod p.
    for (long i = 0; i < n; ++i) {
        for (int x = 0; x < 2; ++x) {
            M2 acc = m2_identity();
            for (const auto& bl : grp.expand_[x][static_cast<std::size_t>(i)])
                acc = m2_mul(acc, bl.sign > 0 ? grp.gens_[bl.gen] : m2_inv(grp.gens_[bl.gen]));
            M2 raw = grp.raw_edge(i, x);
            M2 want = is_pm_identity(raw) ? m2_identity() : grp.sign_normalize(raw);
            if (!(acc == want))
                throw std::logic_error("free_generators: expansion check failed at coset " +
                                       std::to_string(i));
        }
    }
    return grp;
}

inline CongruenceGroup CongruenceGroup::from_file(long p, const std::string& path) {
    if (p < 5) throw std::invalid_argument("from_file: prime level must be >= 5");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("from_file: cannot open " + path);
    CongruenceGroup grp;
    grp.p_ = p;
    grp.has_tables_ = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string ta, tb, tc, td;
        if (!(ss >> ta)) continue;
        if (!(ss >> tb >> tc >> td))
            throw std::runtime_error("from_file: line " + std::to_string(lineno) +
                                     ": expected four integers");
        std::string extra;
        if (ss >> extra)
            throw std::runtime_error("from_file: line " + std::to_string(lineno) +
                                     ": trailing tokens");
        M2 g{Int(ta), Int(tb), Int(tc), Int(td)};
        if (m2_det(g) != 1)
            throw std::runtime_error("from_file: line " + std::to_string(lineno) +
                                     ": determinant is not 1");
        if (!gamma_membership(g, grp.p_))
            throw std::runtime_error("from_file: line " + std::to_string(lineno) +
                                     ": matrix not in the level-" + std::to_string(p) + " group");
        grp.gens_.push_back(g);
    }
    std::size_t expected = static_cast<std::size_t>(1 + (p * p - 1) / 12);
    if (grp.gens_.size() != expected)
        throw std::runtime_error("from_file: expected " + std::to_string(expected) +
                                 " generators, got " + std::to_string(grp.gens_.size()));
    return grp;
}

inline std::vector<BasisLetter> CongruenceGroup::rewrite(const M2& g) const {
    if (!has_tables_)
        throw std::logic_error("rewrite: requires internally built coset tables");
    if (!gamma_membership(g, p_))
        throw std::invalid_argument("rewrite: matrix not in the group");

    // Stage 1: Euclid on the bottom row by right multiplications. op codes:
    // 0 = the order-4 letter, 1 = a translation power (exponent attached).
    std::vector<std::pair<int, Int>> ops;
    M2 m = g;
    long guard = 0;
    while (m.c != 0) {
        if (++guard > 8192) throw std::logic_error("rewrite: reduction did not terminate");
        // Right multiplication by the translation power q maps d to d + c q;
        // test the three nearest quotients for the smallest remainder.
        Int q0 = -(m.d / m.c);
        Int best_q = 0, best_v = -1;
        for (const Int& q : {Int(q0 - 1), q0, Int(q0 + 1)}) {
            Int v = m.d + m.c * q;
            if (v < 0) v = -v;
            if (best_v < 0 || v < best_v) {
                best_v = v;
                best_q = q;
            }
        }
        if (best_q != 0) {
            ops.emplace_back(1, best_q);
            m = m2_mul(m, M2{1, best_q, 0, 1});
        }
        if (m.d != 0 && (m.c < 0 ? -m.c : m.c) <= (m.d < 0 ? -m.d : m.d))
            throw std::logic_error("rewrite: Euclid step failed to shrink");
        ops.emplace_back(0, 1);
        m = m2_mul(m, smat());
    }
    // m is upper triangular with unit diagonal up to sign.
    Int tail;
    if (m.a == 1 && m.d == 1) {
        tail = m.b;
    } else if (m.a == -1 && m.d == -1) {
        tail = -m.b;  // m = -(translation by -b)
    } else {
        throw std::logic_error("rewrite: unexpected reduction result");
    }

    // Stage 2: projective letters. The translation is (order-4)(order-6) as a
    // projective word; its inverse is (order-6)^2 (order-4).
    std::vector<int> psl;
    auto emit_translation = [&psl](Int e) {
        if (e > 0) {
            for (Int t = 0; t < e; ++t) {
                psl.push_back(0);
                psl.push_back(1);
            }
        } else {
            for (Int t = 0; t < -e; ++t) {
                psl.push_back(1);
                psl.push_back(1);
                psl.push_back(0);
            }
        }
    };
    // g = (+- translation^tail) * product of inverted ops in reverse order.
    emit_translation(tail);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (it->first == 0) {
            psl.push_back(0);  // the order-4 letter is its own projective inverse
        } else {
            emit_translation(-it->second);
        }
    }

    // Stage 3: walk the coset graph from the base coset, collecting the
    // expansion of each traversed edge.
    std::vector<BasisLetter> word;
    long cur = 0;
    for (int x : psl) {
        const auto& e = expand_[x][static_cast<std::size_t>(cur)];
        word.insert(word.end(), e.begin(), e.end());
        cur = step_[static_cast<std::size_t>(cur)][x];
        if (word.size() > 200000) throw std::logic_error("rewrite: word length bound exceeded");
    }
    if (cur != 0) throw std::logic_error("rewrite: walk did not return to the base coset");

    // Free reduction.
    std::vector<BasisLetter> red;
    for (const auto& bl : word) {
        if (!red.empty() && red.back().gen == bl.gen && red.back().sign == -bl.sign)
            red.pop_back();
        else
            red.push_back(bl);
    }

    // Exact verification: the reduced word multiplies back to the input.
    M2 acc = m2_identity();
    for (const auto& bl : red)
        acc = m2_mul(acc, bl.sign > 0 ? gens_[bl.gen] : m2_inv(gens_[bl.gen]));
    if (!(acc == g)) throw std::logic_error("rewrite: verification product mismatch");
    return red;
}

// ---- Hecke coset data --------------------------------------------------------

// Data for the double coset of h = diag(1, p): p right translates
// h u_i with u_i = [[1, s_i],[0, 1]], the permutation eta it induces per
// generator, and the twisted elements rho_i(gen) in the group.
struct HeckeSetup {
    const CongruenceGroup* grp = nullptr;
    std::vector<long> shifts;
    std::vector<M2> reps;                          // u_i
    std::vector<std::vector<std::size_t>> eta;     // [gen][i] -> image index
    std::vector<std::vector<M2>> twists;           // [gen][i] -> rho_i(gen)
};

// b is reduced mod p into [0, p).
inline long unipotent_class(const M2& g, const Int& p) {
    return static_cast<long>(mod_reduce(g.b, p));
}

inline HeckeSetup coset_reps(const CongruenceGroup& grp, std::vector<long> shifts = {}) {
    long p = static_cast<long>(grp.level());
    if (shifts.empty())
        for (long s = 0; s < p; ++s) shifts.push_back(s);
    if (static_cast<long>(shifts.size()) != p)
        throw std::invalid_argument("coset_reps: need exactly " + std::to_string(p) +
                                    " translates");

    HeckeSetup hs;
    hs.grp = &grp;
    hs.shifts = shifts;
    for (long s : shifts) hs.reps.push_back(M2{1, s, 0, 1});

    // Pairwise inequivalence: u_i u_j^{-1} must avoid the stabilizer, whose
    // elements have upper-right entry 0 mod p.
    std::map<long, std::size_t> of_residue;
    for (std::size_t i = 0; i < hs.reps.size(); ++i) {
        long r = static_cast<long>(mod_reduce(Int(shifts[i]), grp.level()));
        if (!of_residue.emplace(r, i).second)
            throw std::invalid_argument("coset_reps: translates " + std::to_string(i) +
                                        " and " + std::to_string(of_residue[r]) +
                                        " are equivalent");
    }
    for (std::size_t i = 0; i < hs.reps.size(); ++i)
        for (std::size_t j = i + 1; j < hs.reps.size(); ++j)
            if (mod_reduce(m2_mul(hs.reps[i], m2_inv(hs.reps[j])).b, grp.level()) == 0)
                throw std::logic_error("coset_reps: inequivalence check failed");

    // Completeness: the translate classes must be reachable from class 0
    // under the classes of the generators (the class map is additive on the
    // group since diagonal entries are 1 mod p).
    {
        std::set<long> orbit{0};
        bool grew = true;
        while (grew) {
            grew = false;
            for (const M2& gmat : grp.gens()) {
                long b = unipotent_class(gmat, grp.level());
                std::vector<long> cur(orbit.begin(), orbit.end());
                for (long v : cur) {
                    for (long w : {(v + b) % p, ((v - b) % p + p) % p}) {
                        if (orbit.insert(w).second) grew = true;
                    }
                }
            }
        }
        if (static_cast<long>(orbit.size()) != p)
            throw std::logic_error("coset_reps: translates do not cover the coset space");
    }

    // Per generator: the permutation and the twisted group elements, each
    // certified by the defining identity  h u_i g = rho h u_eta(i).
    auto hu = [&grp](long s) { return M2{1, Int(s), 0, grp.level()}; };
    for (std::size_t e = 0; e < grp.gens().size(); ++e) {
        const M2& gmat = grp.gens()[e];
        long b = unipotent_class(gmat, grp.level());
        std::vector<std::size_t> perm(hs.reps.size());
        std::vector<M2> tw(hs.reps.size());
        std::vector<char> hit(hs.reps.size(), 0);
        for (std::size_t i = 0; i < hs.reps.size(); ++i) {
            long target = static_cast<long>(
                mod_reduce(Int(shifts[i]) + Int(b), grp.level()));
            std::size_t j = of_residue.at(target);
            M2 x = m2_mul(m2_mul(hs.reps[i], gmat), m2_inv(hs.reps[j]));
            if (mod_reduce(x.b, grp.level()) != 0)
                throw std::logic_error("coset_reps: twist lies outside the stabilizer");
            M2 rho{x.a, x.b / grp.level(), x.c * grp.level(), x.d};
            if (!gamma_membership(rho, grp.level()))
                throw std::logic_error("coset_reps: conjugated twist not in the group");
            if (!(m2_mul(hu(shifts[i]), gmat) == m2_mul(rho, hu(shifts[j]))))
                throw std::logic_error("coset_reps: defining identity failed");
            perm[i] = j;
            tw[i] = rho;
            hit[j] = 1;
        }
        for (char hbit : hit)
            if (!hbit) throw std::logic_error("coset_reps: permutation not bijective");
        hs.eta.push_back(std::move(perm));
        hs.twists.push_back(std::move(tw));
    }
    return hs;
}

// ---- Hecke coefficient matrices ----------------------------------------------

// Normalized coefficient of the translate h u_i: the central character of h
// times the symmetric-power action of (h u_i)^{-1} twisted by the determinant.
// All k+m twists cancel to an integer matrix equal to the divided-basis action
// of [[p, -s],[0, 1]].
inline Mat<Int> hecke_coefficient(const ReductiveWeight& w, long shift, const Int& p) {
    return sym_divided_int(M2{p, -shift, 0, 1}, w.k);
}

// The same translate without the central-character normalization; entries in
// the height-j column have p-valuation j - k, so this version is not integral
// for k >= 1.
inline Mat<Rat> unnormalized_coefficient(const ReductiveWeight& w, long shift, const Int& p) {
    Rat rp(p);
    Mat<Rat> m = sym_divided_rat(1, Rat(-shift) / rp, 0, 1 / rp, w.k);
    // det(h u)^{-m} with det = p.
    Rat scale = rat_pow(rp, -w.m);
    for (auto& v : m.a) v *= scale;
    return m;
}

// Checks that every translate coefficient kills the truncating sublattice:
// entry (i, j) must have p-valuation at least min(j, r).
inline bool hecke_annihilates(const HeckeSetup& hs, const ReductiveWeight& w, long r,
                              bool normalized = true) {
    const Int& p = hs.grp->level();
    for (long s : hs.shifts) {
        Mat<Rat> a = normalized ? mat_cast<Rat>(hecke_coefficient(w, s, p))
                                : unnormalized_coefficient(w, s, p);
        for (std::size_t i = 0; i < a.rows; ++i) {
            for (std::size_t j = 0; j < a.cols; ++j) {
                if (a(i, j) == 0) continue;
                long need = std::min<long>(static_cast<long>(j), r);
                if (need > 0 && vp_rat(a(i, j), p) < need) return false;
                if (need == 0 && vp_rat(a(i, j), p) < 0) return false;
            }
        }
    }
    return true;
}

// ---- the Hecke operator on 1-cocycles -----------------------------------------

// Words for every twist, computed once per setup.
inline std::vector<std::vector<std::vector<BasisLetter>>> twist_words(const HeckeSetup& hs) {
    const CongruenceGroup& grp = *hs.grp;
    std::vector<std::vector<std::vector<BasisLetter>>> words(grp.gens().size());
    for (std::size_t e = 0; e < grp.gens().size(); ++e) {
        words[e].resize(hs.reps.size());
        for (std::size_t i = 0; i < hs.reps.size(); ++i)
            words[e][i] = grp.rewrite(hs.twists[e][i]);
    }
    return words;
}

// A cocycle is a tuple of module vectors indexed by the free basis, one block
// of size k+1 per generator. The operator sends c to
//   (T c)(gen) = sum_i A_i c(rho_i(gen)),
// expanded through the cocycle identity along each twist word. The prefix
// products are tracked at the 2x2 level and absorbed into the translate as
// Sym([[p, -s_i],[0,1]] * prefix), which keeps every contribution integral.
struct HeckeMatrices {
    Mat<Int> on_cocycles;  // (g(k+1)) x (g(k+1))
    Mat<Int> degree_zero;  // (k+1) x (k+1): the sum of the translate coefficients
};

namespace detail {

// Shared assembly loop; `emit` receives (row block, col block, 2x2 integer
// matrix, sign) for each contribution in the divided or plain route. Runs
// across generators in parallel: every contribution for generator e lands in
// row block e only, so the callbacks never write to overlapping state.
template <typename Emit>
void fold_hecke_words(const HeckeSetup& hs,
                      const std::vector<std::vector<std::vector<BasisLetter>>>& words,
                      Emit&& emit) {
    const CongruenceGroup& grp = *hs.grp;
    parallel_for(grp.gens().size(), [&](std::size_t e) {
        for (std::size_t i = 0; i < hs.reps.size(); ++i) {
            M2 gi{grp.level(), Int(-hs.shifts[i]), 0, 1};
            M2 prefix = m2_identity();
            for (const auto& bl : words[e][i]) {
                if (bl.sign > 0) {
                    emit(e, bl.gen, m2_mul(gi, prefix), +1);
                    prefix = m2_mul(prefix, grp.gens()[bl.gen]);
                } else {
                    prefix = m2_mul(prefix, m2_inv(grp.gens()[bl.gen]));
                    emit(e, bl.gen, m2_mul(gi, prefix), -1);
                }
            }
        }
    });
}

}  // namespace detail

// Exact integer matrices in the divided basis.
inline HeckeMatrices hecke_cocycle_matrix(const HeckeSetup& hs, const ReductiveWeight& w) {
    const CongruenceGroup& grp = *hs.grp;
    std::size_t g = grp.gens().size();
    std::size_t n = static_cast<std::size_t>(w.k) + 1;
    HeckeMatrices out;
    out.on_cocycles = Mat<Int>(g * n, g * n);
    out.degree_zero = Mat<Int>(n, n);
    for (std::size_t i = 0; i < hs.reps.size(); ++i) {
        Mat<Int> ai = sym_divided_int(M2{grp.level(), Int(-hs.shifts[i]), 0, 1}, w.k);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) out.degree_zero(r, c) += ai(r, c);
    }
    auto words = twist_words(hs);
    detail::fold_hecke_words(hs, words, [&](std::size_t e, std::size_t gidx, const M2& m, int sg) {
        Mat<Int> block = sym_divided_int(m, w.k);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                Int& dst = out.on_cocycles(e * n + r, gidx * n + c);
                dst += (sg > 0) ? block(r, c) : -block(r, c);
            }
    });
    return out;
}

// The same matrices modulo `modulus`, assembled in the plain monomial basis
// (conjugate over Q, so characteristic polynomials agree), which avoids all
// binomial divisions.
inline HeckeMatrices hecke_cocycle_matrix_mod(const HeckeSetup& hs, const ReductiveWeight& w,
                                              const Int& modulus) {
    const CongruenceGroup& grp = *hs.grp;
    std::size_t g = grp.gens().size();
    std::size_t n = static_cast<std::size_t>(w.k) + 1;
    HeckeMatrices out;
    out.on_cocycles = Mat<Int>(g * n, g * n);
    out.degree_zero = Mat<Int>(n, n);
    for (std::size_t i = 0; i < hs.reps.size(); ++i) {
        Mat<Int> ai = sym_plain_mod(M2{grp.level(), Int(-hs.shifts[i]), 0, 1}, w.k, modulus);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                out.degree_zero(r, c) = (out.degree_zero(r, c) + ai(r, c)) % modulus;
    }
    auto words = twist_words(hs);
    detail::fold_hecke_words(hs, words, [&](std::size_t e, std::size_t gidx, const M2& m, int sg) {
        Mat<Int> block = sym_plain_mod(m, w.k, modulus);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                Int& dst = out.on_cocycles(e * n + r, gidx * n + c);
                dst = mod_reduce(dst + ((sg > 0) ? block(r, c) : -block(r, c)), modulus);
            }
    });
    return out;
}

// Invariants: dimension of the invariant subspace and the characteristic
// polynomial of the degree-zero operator restricted to it (exact, small).
struct InvariantData {
    long dim = 0;
    std::vector<Int> charpoly;  // of the restricted degree-zero operator
};

inline InvariantData invariant_data(const CongruenceGroup& grp, const ReductiveWeight& w) {
    std::size_t n = static_cast<std::size_t>(w.k) + 1;
    std::size_t g = grp.gens().size();
    Mat<Rat> stacked(g * n, n);
    for (std::size_t e = 0; e < g; ++e) {
        Mat<Int> m = sym_divided_int(grp.gens()[e], w.k);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                stacked(e * n + r, c) = Rat(m(r, c)) - (r == c ? 1 : 0);
    }
    Mat<Rat> ker = kernel_basis(stacked);
    InvariantData out;
    out.dim = static_cast<long>(ker.cols);
    if (out.dim == 0) {
        out.charpoly = {Int(1)};
        return out;
    }
    // Restrict the degree-zero operator: solve ker * x = t0 * column.
    Mat<Int> t0(n, n);
    long p = static_cast<long>(grp.level());
    for (long s = 0; s < p; ++s) {
        Mat<Int> ai = sym_divided_int(M2{grp.level(), Int(-s), 0, 1}, w.k);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) t0(r, c) += ai(r, c);
    }
    // The degree-zero shifts above use the default translates; the restricted
    // operator is independent of that choice on invariants.
    Mat<Rat> restr(static_cast<std::size_t>(out.dim), static_cast<std::size_t>(out.dim));
    for (std::size_t c = 0; c < ker.cols; ++c) {
        std::vector<Rat> img(n, Rat(0));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t t = 0; t < n; ++t) img[r] += Rat(t0(r, t)) * ker(t, c);
        auto sol = solve(ker, img);
        if (!sol) throw std::logic_error("invariant_data: operator does not preserve invariants");
        for (std::size_t r = 0; r < ker.cols; ++r) restr(r, c) = (*sol)[r];
    }
    auto cp = charpoly(restr);
    for (const Rat& v : cp) out.charpoly.push_back(to_int(v));
    return out;
}

// ---- characteristic polynomial through degree one ------------------------------

// The degree-one space sits in the exact sequence
//   0 -> coboundaries -> cocycles -> degree-one -> 0
// with coboundaries identified with module / invariants, and the operator is
// compatible with all three. Hence
//   charpoly(cocycles) * charpoly(invariants) = charpoly(degree-one) * charpoly(module).
struct H1Charpoly {
    std::vector<Int> poly;
    long invariant_dim = 0;
    long dim = 0;
};

inline H1Charpoly hecke_h1_charpoly(const HeckeSetup& hs, const ReductiveWeight& w) {
    const CongruenceGroup& grp = *hs.grp;
    InvariantData inv = invariant_data(grp, w);
    HeckeMatrices hm = hecke_cocycle_matrix(hs, w);
    std::vector<Int> cz = charpoly(hm.on_cocycles);
    std::vector<Int> cm = charpoly(hm.degree_zero);
    H1Charpoly out;
    out.invariant_dim = inv.dim;
    out.poly = poly_divide_exact(poly_mul(cz, inv.charpoly), cm);
    out.dim = static_cast<long>(out.poly.size()) - 1;
    long g = static_cast<long>(grp.gens().size());
    if (out.dim != (g - 1) * (w.k + 1) + inv.dim)
        throw std::logic_error("hecke_h1_charpoly: degree-one dimension mismatch");
    return out;
}

// Residues of the same polynomial modulo p^cap (leading coefficient 1).
inline std::vector<Int> hecke_h1_charpoly_mod(const HeckeSetup& hs, const ReductiveWeight& w,
                                              long cap) {
    const CongruenceGroup& grp = *hs.grp;
    Int modulus = ipow(grp.level(), cap);
    InvariantData inv = invariant_data(grp, w);
    HeckeMatrices hm = hecke_cocycle_matrix_mod(hs, w, modulus);
    std::vector<Int> cz = charpoly_mod(hm.on_cocycles, modulus);
    std::vector<Int> cm = charpoly_mod(hm.degree_zero, modulus);
    std::vector<Int> num = poly_mul_mod(cz, poly_mod(inv.charpoly, modulus), modulus);
    std::vector<Int> quo = poly_divide_monic_mod(num, cm, modulus);
    long g = static_cast<long>(grp.gens().size());
    if (static_cast<long>(quo.size()) - 1 != (g - 1) * (w.k + 1) + inv.dim)
        throw std::logic_error("hecke_h1_charpoly_mod: degree-one dimension mismatch");
    return quo;
}

// Number of degree-one eigenvalues with slope <= beta, counted with
// multiplicity. Small spaces use the exact polynomial; large ones use
// residues with certified precision.
inline long hecke_d_beta(const HeckeSetup& hs, const ReductiveWeight& w, const Rat& beta) {
    const CongruenceGroup& grp = *hs.grp;
    long g = static_cast<long>(grp.gens().size());
    long total = g * (w.k + 1);
    if (total <= 64) {
        H1Charpoly cp = hecke_h1_charpoly(hs, w);
        return newton_slopes(cp.poly, grp.level()).d(beta);
    }
    // cap > beta * degree certifies the slope-(<= beta) prefix of the hull.
    Rat need = beta * Rat(total);
    long cap = static_cast<long>(rat_num(need) / rat_den(need)) + 10;
    std::vector<Int> res = hecke_h1_charpoly_mod(hs, w, cap);
    return d_beta_from_residues(res, grp.level(), cap, beta);
}

// ---- group action on truncated modules ------------------------------------------

// Action of a congruence-group element on a rank-one truncated module via the
// unipotent-torus-unipotent splitting g = x_-(b/d) t(d) x_+(c/d): the
// lower-left ratio has positive p-valuation as the level-raising letter
// requires, and the torus scales the height-j line by d^(k-2j).
inline TruncMat trunc_group_action(const TruncatedModule& t, const M2& g) {
    const Int& p = t.spec().p;
    if (t.module().slots().empty())
        throw std::invalid_argument("trunc_group_action: empty module");
    if (t.module().slots()[0].mu.size() != 1)
        throw std::invalid_argument("trunc_group_action: rank-one modules only");
    if (!gamma_membership(g, p))
        throw std::invalid_argument("trunc_group_action: matrix not in the group");
    long lam = static_cast<long>(t.module().slots()[0].mu[0]);
    Rat d(g.d);
    TruncMat lower = t.level_letter_action(false, 0, Rat(g.b) / d);
    TruncMat upper = t.level_letter_action(true, 0, Rat(g.c) / d);
    TruncMat torus = t.zero_map();
    for (std::size_t r = 0; r < torus.m.rows; ++r) {
        long e = lam - 2 * torus.row_ht[r];
        torus.m(r, r) = rat_mod(rat_pow(d, e), torus.row_mod[r], p);
    }
    return TruncatedModule::multiply(lower, TruncatedModule::multiply(torus, upper));
}

// ---- size of degree-one cohomology of a finite module -----------------------------

// For actions of a free group on a finite module M (given as truncated-module
// matrices), degree-one cohomology is the cokernel of the stacked maps
// (action_j - 1) : M -> M^g; its cardinality exponent E1 and the derived
// E0 = E1 - (g-1) * E_M (the degree-zero exponent by Euler characteristic)
// are returned as p-exponents.
inline std::pair<long, long> h1_exponents(const std::vector<TruncMat>& acts, const Int& p) {
    if (acts.empty()) throw std::invalid_argument("h1_exponents: need at least one action");
    const TruncMat& first = acts[0];
    std::size_t n = first.m.rows;
    std::size_t g = acts.size();
    for (const TruncMat& a : acts) {
        if (a.m.rows != n || a.m.cols != n)
            throw std::invalid_argument("h1_exponents: action shapes differ");
        if (a.row_mod != first.row_mod)
            throw std::invalid_argument("h1_exponents: action moduli differ");
    }
    if (n == 0) return {0, 0};
    long em = 0;
    for (const Int& m : first.row_mod) {
        auto v = vp(m, p);
        if (!v || ipow(p, *v) != m)
            throw std::invalid_argument("h1_exponents: moduli must be powers of p");
        em += *v;
    }
    // Relations: image of (a_j - 1) plus the moduli on each block.
    Mat<Int> big(g * n, n + g * n);
    for (std::size_t j = 0; j < g; ++j) {
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c)
                big(j * n + r, c) = acts[j].m(r, c) - (r == c ? 1 : 0);
            big(j * n + r, n + j * n + r) = first.row_mod[r];
        }
    }
    Int card = cokernel_cardinality(big);
    auto e1 = vp(card, p);
    if (!e1 || ipow(p, *e1) != card)
        throw std::logic_error("h1_exponents: cohomology size is not a power of p");
    long e0 = *e1 - static_cast<long>(g - 1) * em;
    if (e0 < 0 || e0 > em)
        throw std::logic_error("h1_exponents: degree-zero exponent outside structural range");
    return {*e1, e0};
}

// Exponents for the standard truncated module at highest weight k, cutoff r.
inline std::pair<long, long> truncated_h1_exponents(const CongruenceGroup& grp,
                                                    StraighteningEngine& eng, long k, long r) {
    if (k < 0 || r < 0) throw std::invalid_argument("truncated_h1_exponents: negative parameter");
    HighestWeightModule mod(eng, {Int(k)}, std::min(k, r));
    TruncationSpec spec{grp.level(), r};
    TruncatedModule t(mod, spec);
    std::vector<TruncMat> acts;
    for (const M2& g : grp.gens()) acts.push_back(trunc_group_action(t, g));
    return h1_exponents(acts, grp.level());
}

// ---- slope pipeline -------------------------------------------------------------

// For weight (k, m), slope bound beta and truncation depth r > beta + 1:
// the number of small-slope degree-one eigenvalues is bounded by the
// cardinality exponent of truncated degree-one cohomology.
struct SlopeBoundReport {
    long k = 0;
    long m = 0;
    long d = 0;          // eigenvalues with slope <= beta
    long exponent = 0;   // E1 of the truncated module
    bool pass = false;
};

inline SlopeBoundReport slope_cohomology_bound(const HeckeSetup& hs, StraighteningEngine& eng,
                                               const ReductiveWeight& w, const Rat& beta,
                                               long r) {
    if (!(Rat(r) > beta + 1))
        throw std::invalid_argument("slope_cohomology_bound: requires r > beta + 1");
    SlopeBoundReport rep;
    rep.k = w.k;
    rep.m = w.m;
    rep.d = hecke_d_beta(hs, w, beta);
    auto [e1, e0] = truncated_h1_exponents(*hs.grp, eng, w.k, r);
    (void)e0;
    rep.exponent = e1;
    rep.pass = rep.d <= rep.exponent;
    return rep;
}

// ---- uniform bound over a congruence class of weights ------------------------------

// The truncated exponent depends on k only through k mod p^M with
// M = congruence_exponent(p, r), because diagonal entries of the group are
// 1 mod p and every torus weight enters through d^(k - 2j). The bound C is
// the maximum exponent over one full window of weights, and each swept k is
// checked against its class representative before comparing d(k) <= C.
struct SweepEntry {
    long k = 0;
    long kclass = 0;
    long d = 0;
    long exponent = 0;
    bool pass = false;
};

struct UniformBoundReport {
    long bound = 0;          // C
    long lambda_size = 0;    // number of class representatives scanned
    long congruence_exp = 0; // M
    std::vector<SweepEntry> sweep;
    bool all_pass = true;
};

inline UniformBoundReport uniform_bound(const HeckeSetup& hs, StraighteningEngine& eng,
                                        const Rat& beta, long r, long klo, long khi) {
    if (!(Rat(r) > beta + 1))
        throw std::invalid_argument("uniform_bound: requires r > beta + 1");
    if (klo < 0 || khi < klo) throw std::invalid_argument("uniform_bound: bad sweep range");
    const CongruenceGroup& grp = *hs.grp;
    long p = static_cast<long>(grp.level());
    long m = congruence_exponent(p, r);
    Int pm = ipow(grp.level(), m);
    if (pm > 200000) throw std::invalid_argument("uniform_bound: congruence window too large");
    long pml = static_cast<long>(pm);
    long kmax = r + pml;  // one full window beyond the cutoff

    UniformBoundReport rep;
    rep.congruence_exp = m;
    rep.lambda_size = kmax + 1;
    std::vector<long> cls(static_cast<std::size_t>(kmax) + 1);
    for (long k = 0; k <= kmax; ++k) {
        cls[static_cast<std::size_t>(k)] = truncated_h1_exponents(grp, eng, k, r).first;
        rep.bound = std::max(rep.bound, cls[static_cast<std::size_t>(k)]);
    }
    for (long k = klo; k <= khi; ++k) {
        SweepEntry se;
        se.k = k;
        se.kclass = k % pml;
        se.exponent = truncated_h1_exponents(grp, eng, k, r).first;
        if (se.exponent != cls[static_cast<std::size_t>(se.kclass)])
            throw std::logic_error("uniform_bound: exponent not constant on congruence class at k=" +
                                   std::to_string(k));
        se.d = hecke_d_beta(hs, ReductiveWeight{k, 0}, beta);
        se.pass = se.d <= rep.bound;
        rep.all_pass = rep.all_pass && se.pass;
        rep.sweep.push_back(se);
    }
    return rep;
}

}  // namespace chevtrunc
