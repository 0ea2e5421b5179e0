#pragma once

// Integral form of the enveloping algebra: Chevalley structure constants
// built from extraspecial-pair sign choices (verified against Jacobi and
// the root-string magnitudes before use), and a straightening engine that
// rewrites arbitrary generator words into the ordered basis
// X_-^(a) H^b X_+^(c) with divided powers outside and binomial torals in
// the middle. Internally coefficients are exact rationals; integrality is
// asserted wherever the integral form demands it.

#include "chevtrunc/rootsys.hpp"

#include <map>
#include <tuple>

namespace chevtrunc {

// A signed root: idx into rs.pos, neg flags the negative copy.
struct SRoot {
    std::size_t idx;
    bool neg;
    bool operator==(const SRoot& o) const { return idx == o.idx && neg == o.neg; }
};

// Sparse Lie algebra element over the Chevalley basis
// { x_{-beta} } + { h_i } + { x_alpha }: kind 0 = negative root vector,
// 1 = simple coroot, 2 = positive root vector.
struct LieTerm {
    int kind;
    std::size_t idx;
    Rat coeff;
};
using LieElem = std::vector<LieTerm>;

class ChevalleyAlgebra {
public:
    RootSystem rs;

    explicit ChevalleyAlgebra(RootSystem r) : rs(std::move(r)) {
        build_positive_table();
        verify_constants();
    }

    std::size_t positive_count() const { return rs.pos.size(); }

    // Signed-root sum; nullopt when not a root (including zero).
    std::optional<SRoot> root_sum(const SRoot& a, const SRoot& b) const {
        std::vector<long> c(rs.rank);
        for (int i = 0; i < rs.rank; ++i)
            c[i] = signed_coord(a, i) + signed_coord(b, i);
        return lookup(c);
    }

    // N_{a,b} with [x_a, x_b] = N_{a,b} x_{a+b}, any sign combination.
    Int n_constant(const SRoot& a, const SRoot& b) const {
        auto s = root_sum(a, b);
        if (!s) throw std::logic_error("n_constant: sum is not a root");
        return get_n(a, b);
    }

    // Full bracket of two basis elements.
    LieElem bracket(int kind1, std::size_t i1, int kind2, std::size_t i2) const {
        if (kind1 == 1 && kind2 == 1) return {};
        if (kind1 == 1) {
            LieElem neg = bracket(kind2, i2, kind1, i1);
            for (auto& t : neg) t.coeff = -t.coeff;
            return neg;
        }
        SRoot a{i1, kind1 == 0};
        if (kind2 == 1) {
            // [x_a, h_i] = -a(h_i) x_a
            long w = root_eval(a, static_cast<int>(i2));
            if (w == 0) return {};
            return {LieTerm{kind1, i1, Rat(-w)}};
        }
        SRoot b{i2, kind2 == 0};
        if (a.idx == b.idx && a.neg != b.neg) {
            // [x_alpha, x_{-alpha}] = h_alpha, negated when a is the negative one
            LieElem e;
            const auto& cor = rs.pos[a.idx].coroot;
            for (int i = 0; i < rs.rank; ++i) {
                if (cor[i] == 0) continue;
                e.push_back(LieTerm{1, static_cast<std::size_t>(i), a.neg ? Rat(-cor[i]) : Rat(cor[i])});
            }
            return e;
        }
        auto s = root_sum(a, b);
        if (!s) return {};
        Int n = get_n(a, b);
        if (n == 0) return {};
        return {LieTerm{s->neg ? 0 : 2, s->idx, Rat(n)}};
    }

    LieElem bracket(const LieElem& x, int kind, std::size_t idx) const {
        std::map<std::pair<int, std::size_t>, Rat> acc;
        for (const auto& t : x) {
            for (const auto& u : bracket(t.kind, t.idx, kind, idx))
                acc[{u.kind, u.idx}] += t.coeff * u.coeff;
        }
        LieElem r;
        for (auto& [k, c] : acc)
            if (c != 0) r.push_back(LieTerm{k.first, k.second, c});
        return r;
    }

    long root_eval(const SRoot& a, int i) const {
        long w = rs.pairing_root_simple_coroot(rs.pos[a.idx].c, i);
        return a.neg ? -w : w;
    }

    // Longest down-string: max q >= 0 with b - q a still a root.
    long string_down(const SRoot& a, const SRoot& b) const {
        long q = 0;
        while (true) {
            std::vector<long> c(rs.rank);
            for (int i = 0; i < rs.rank; ++i)
                c[i] = signed_coord(b, i) - (q + 1) * signed_coord(a, i);
            if (!lookup(c)) break;
            ++q;
        }
        return q;
    }

    std::pair<std::size_t, std::size_t> extraspecial_pair(std::size_t gamma) const {
        return extraspecial_.at(gamma);
    }

private:
    // n_pos_(i, j) = N_{alpha_i, alpha_j} for positive pairs with root sum.
    Mat<Int> n_pos_;
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> extraspecial_;

    long signed_coord(const SRoot& a, int i) const {
        long v = rs.pos[a.idx].c[i];
        return a.neg ? -v : v;
    }

    std::optional<SRoot> lookup(const std::vector<long>& c) const {
        bool any = false, allnn = true, allnp = true;
        for (long x : c) {
            if (x != 0) any = true;
            if (x < 0) allnn = false;
            if (x > 0) allnp = false;
        }
        if (!any) return std::nullopt;
        if (allnn) {
            auto i = rs.find_positive(c);
            if (i) return SRoot{*i, false};
            return std::nullopt;
        }
        if (allnp) {
            std::vector<long> m(c.size());
            for (std::size_t i = 0; i < c.size(); ++i) m[i] = -c[i];
            auto i = rs.find_positive(m);
            if (i) return SRoot{*i, true};
        }
        return std::nullopt;
    }

    Rat d_of(const SRoot& a) const {
        Rat d = 0;
        const auto& c = rs.pos[a.idx].c;
        for (int i = 0; i < rs.rank; ++i)
            for (int j = 0; j < rs.rank; ++j)
                d += Rat(rs.d[i] * rs.cartan(i, j) * c[i] * c[j]);
        return d / 2; // half the squared length; sign-independent
    }

    // N for any sign pattern, reduced to the positive table through the
    // antisymmetry, negation, and cyclic-triple relations.
    Int get_n(const SRoot& a, const SRoot& b) const {
        if (!a.neg && !b.neg) return n_pos_(a.idx, b.idx);
        if (a.neg && b.neg) return -get_n(SRoot{a.idx, false}, SRoot{b.idx, false});
        if (a.neg) return -get_n(b, a);
        // a positive, b negative, a+b a root
        auto s = root_sum(a, b);
        if (!s) throw std::logic_error("get_n: not a root sum");
        if (!s->neg) {
            // sigma = a + b > 0, delta = -b: N_{a,b} = N_{sigma,delta} |sigma|^2/|a|^2
            SRoot delta{b.idx, false};
            Rat v = Rat(get_n(*s, delta)) * d_of(*s) / d_of(a);
            return to_int(v);
        }
        return -get_n(SRoot{a.idx, true}, SRoot{b.idx, false});
    }

    void build_positive_table() {
        std::size_t s = rs.pos.size();
        n_pos_ = Mat<Int>(s, s);
        // process target roots by increasing height (pos is height-sorted)
        for (std::size_t g = 0; g < s; ++g) {
            if (rs.pos[g].ht < 2) continue;
            // extraspecial pair: first positive root xi (in the fixed order)
            // with gamma - xi still positive
            std::size_t xi = s, eta = s;
            for (std::size_t i = 0; i < s; ++i) {
                std::vector<long> c(rs.rank);
                bool ok = true;
                for (int t = 0; t < rs.rank; ++t) {
                    c[t] = rs.pos[g].c[t] - rs.pos[i].c[t];
                    if (c[t] < 0) ok = false;
                }
                if (!ok) continue;
                auto j = rs.find_positive(c);
                if (j) {
                    xi = i;
                    eta = *j;
                    break;
                }
            }
            if (xi == s) throw std::logic_error("no extraspecial pair found");
            extraspecial_[g] = {xi, eta};
            long q = string_down(SRoot{xi, false}, SRoot{eta, false});
            n_pos_(xi, eta) = q + 1;
            n_pos_(eta, xi) = -(q + 1);

            // all other positive pairs summing to gamma via the Jacobi
            // identity against the extraspecial pair
            for (std::size_t ai = 0; ai < s; ++ai) {
                std::vector<long> bc(rs.rank);
                bool ok = true;
                for (int t = 0; t < rs.rank; ++t) {
                    bc[t] = rs.pos[g].c[t] - rs.pos[ai].c[t];
                    if (bc[t] < 0) ok = false;
                }
                if (!ok) continue;
                auto bj = rs.find_positive(bc);
                if (!bj) continue;
                std::size_t bi = *bj;
                if ((ai == xi && bi == eta) || (ai == eta && bi == xi)) continue;
                if (n_pos_(ai, bi) != 0) continue;
                SRoot A{ai, false}, B{bi, false}, Xi{xi, false}, Eta{eta, false};
                SRoot negA{ai, true};
                // [[x_xi, x_eta], x_{-A}] = [x_xi,[x_eta,x_{-A}]] - [x_eta,[x_xi,x_{-A}]]
                Rat term1 = 0, term2 = 0;
                if (root_sum(Eta, negA))
                    term1 = Rat(get_n(Eta, negA)) * Rat(get_n(Xi, *root_sum(Eta, negA)));
                if (root_sum(Xi, negA))
                    term2 = Rat(get_n(Xi, negA)) * Rat(get_n(Eta, *root_sum(Xi, negA)));
                // LHS coefficient: -N_{xi,eta} N_{A,B} |B|^2 / |gamma|^2
                Rat nab = -(term1 - term2) * d_of(SRoot{g, false}) /
                          (d_of(B) * Rat(n_pos_(xi, eta)));
                Int nv = to_int(nab);
                n_pos_(ai, bi) = nv;
                n_pos_(bi, ai) = -nv;
            }
        }
    }

    void verify_constants() const {
        std::size_t s = rs.pos.size();
        // |N_{a,b}| = (down-string length) + 1 for every bracketing pair
        std::vector<SRoot> all;
        for (std::size_t i = 0; i < s; ++i) {
            all.push_back(SRoot{i, false});
            all.push_back(SRoot{i, true});
        }
        for (const auto& a : all)
            for (const auto& b : all) {
                if (a.idx == b.idx && a.neg != b.neg) continue;
                if (a == b) continue;
                if (!root_sum(a, b)) continue;
                Int n = get_n(a, b);
                long q = string_down(a, b);
                if (abs(n) != q + 1)
                    throw std::logic_error("structure constant magnitude violates root string");
            }
        // full Jacobi identity over the basis
        std::vector<std::pair<int, std::size_t>> basis;
        for (std::size_t i = 0; i < s; ++i) basis.push_back({0, i});
        for (int i = 0; i < rs.rank; ++i) basis.push_back({1, static_cast<std::size_t>(i)});
        for (std::size_t i = 0; i < s; ++i) basis.push_back({2, i});
        auto add = [&](std::map<std::pair<int, std::size_t>, Rat>& acc, const LieElem& e) {
            for (const auto& t : e) acc[{t.kind, t.idx}] += t.coeff;
        };
        for (std::size_t x = 0; x < basis.size(); ++x)
            for (std::size_t y = x + 1; y < basis.size(); ++y)
                for (std::size_t z = y + 1; z < basis.size(); ++z) {
                    std::map<std::pair<int, std::size_t>, Rat> acc;
                    auto [kx, ix] = basis[x];
                    auto [ky, iy] = basis[y];
                    auto [kz, iz] = basis[z];
                    add(acc, bracket(bracket(kx, ix, ky, iy), kz, iz));
                    add(acc, bracket(bracket(ky, iy, kz, iz), kx, ix));
                    add(acc, bracket(bracket(kz, iz, kx, ix), ky, iy));
                    for (auto& [k, c] : acc)
                        if (c != 0) throw std::logic_error("Jacobi identity fails");
                }
    }
};

// ---- ordered monomials and straightening -----------------------------------

// Ordered basis word: f = divided-power exponents of the negative root
// vectors (indexed like rs.pos), b = toral exponents, e = divided-power
// exponents of the positive root vectors. Toral semantics depend on
// context: the engine keeps ordinary powers h^b internally and converts to
// the binomial basis binom(h,b) at its boundary.
struct PbwMonomial {
    std::vector<long> f, b, e;
    bool operator<(const PbwMonomial& o) const {
        return std::tie(f, b, e) < std::tie(o.f, o.b, o.e);
    }
    bool operator==(const PbwMonomial& o) const { return f == o.f && b == o.b && e == o.e; }
    long toral_length() const {
        long s = 0;
        for (long x : b) s += x;
        return s;
    }
};

using PbwElem = std::map<PbwMonomial, Rat>;

inline void elem_add(PbwElem& dst, const PbwMonomial& m, const Rat& c) {
    if (c == 0) return;
    auto it = dst.find(m);
    if (it == dst.end()) {
        dst.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) dst.erase(it);
    }
}

// One generator power in an unordered word. Codes order the PBW word:
// negatives (by root index), then torals, then positives.
struct Factor {
    int code;
    long exp;
    bool operator<(const Factor& o) const { return std::tie(code, exp) < std::tie(o.code, o.exp); }
    bool operator==(const Factor& o) const { return code == o.code && exp == o.exp; }
};
using Word = std::vector<Factor>;

class StraighteningEngine {
public:
    explicit StraighteningEngine(const ChevalleyAlgebra& g) : g_(g), s_(g.positive_count()) {}

    int code_neg(std::size_t i) const { return static_cast<int>(i); }
    int code_toral(int i) const { return static_cast<int>(s_) + i; }
    int code_pos(std::size_t i) const { return static_cast<int>(s_) + g_.rs.rank + static_cast<int>(i); }

    bool is_neg(int code) const { return code < static_cast<int>(s_); }
    bool is_toral(int code) const {
        return code >= static_cast<int>(s_) && code < static_cast<int>(s_) + g_.rs.rank;
    }
    bool is_pos(int code) const { return code >= static_cast<int>(s_) + g_.rs.rank; }

    // Rewrites an arbitrary word of generator powers (divided powers for
    // root vectors, ordinary powers for torals) into the ordered basis.
    PbwElem straighten(const Word& w) {
        Word key;
        key.reserve(w.size());
        for (const auto& f : w) {
            if (f.exp < 0) throw std::invalid_argument("negative exponent");
            if (f.exp > 0) key.push_back(f);
        }
        return normalize(key);
    }

    // Product in the enveloping algebra of two straightened elements.
    PbwElem multiply(const PbwElem& x, const PbwElem& y) {
        PbwElem out;
        for (const auto& [mx, cx] : x)
            for (const auto& [my, cy] : y) {
                Word w = to_word(mx);
                Word w2 = to_word(my);
                w.insert(w.end(), w2.begin(), w2.end());
                for (const auto& [m, c] : normalize(w)) elem_add(out, m, cx * cy * c);
            }
        return out;
    }

    Word to_word(const PbwMonomial& m) const {
        Word w;
        for (std::size_t i = 0; i < s_; ++i)
            if (m.f[i] > 0) w.push_back({code_neg(i), m.f[i]});
        for (int i = 0; i < g_.rs.rank; ++i)
            if (m.b[i] > 0) w.push_back({code_toral(i), m.b[i]});
        for (std::size_t i = 0; i < s_; ++i)
            if (m.e[i] > 0) w.push_back({code_pos(i), m.e[i]});
        return w;
    }

    // Ordinary toral powers -> binomial toral basis, variable by variable:
    // h^m = sum_j S(m,j) j! binom(h,j).
    PbwElem to_binomial(const PbwElem& x) const {
        PbwElem out;
        for (const auto& [m, c] : x) expand_toral(m, c, 0, m.b, out, true);
        return out;
    }

    PbwElem from_binomial(const PbwElem& x) const {
        PbwElem out;
        for (const auto& [m, c] : x) expand_toral(m, c, 0, m.b, out, false);
        return out;
    }

    // lambda(H^b) in the binomial basis: prod_i binom(<lambda, alpha_i^vee>, b_i).
    Int eval_toral(const std::vector<long>& b, const std::vector<Int>& lambda) const {
        Int v = 1;
        for (std::size_t i = 0; i < b.size(); ++i) v *= binom(lambda[i], b[i]);
        return v;
    }

    // Straightened x_alpha^(k) X_-^(a), in the binomial toral basis, with
    // the integral-form guarantees asserted: integer coefficients and toral
    // length at most k.
    PbwElem divided_power_commute(std::size_t alpha, long k, const std::vector<long>& a) {
        Word w;
        w.push_back({code_pos(alpha), k});
        for (std::size_t i = 0; i < s_; ++i)
            if (a[i] > 0) w.push_back({code_neg(i), a[i]});
        PbwElem r = to_binomial(straighten(w));
        for (const auto& [m, c] : r) {
            if (!is_integer(c))
                throw std::logic_error("straightening produced a non-integral coefficient");
            if (m.toral_length() > k)
                throw std::logic_error("straightening exceeded the toral length bound");
        }
        return r;
    }

    // Applies an internal-basis element to a highest vector of weight
    // lambda: drops monomials with a positive part, evaluates torals as
    // ordinary powers, returns f-exponent -> coefficient.
    std::map<std::vector<long>, Rat> apply_to_highest(const PbwElem& x,
                                                      const std::vector<Int>& lambda) const {
        std::map<std::vector<long>, Rat> out;
        for (const auto& [m, c] : x) {
            bool haspos = false;
            for (long v : m.e)
                if (v > 0) haspos = true;
            if (haspos) continue;
            Rat v = c;
            for (int i = 0; i < g_.rs.rank; ++i)
                for (long t = 0; t < m.b[i]; ++t) v *= Rat(lambda[i]);
            if (v == 0) continue;
            auto it = out.find(m.f);
            if (it == out.end()) out.emplace(m.f, v);
            else {
                it->second += v;
                if (it->second == 0) out.erase(it);
            }
        }
        return out;
    }

    const ChevalleyAlgebra& algebra() const { return g_; }

private:
    const ChevalleyAlgebra& g_;
    std::size_t s_;
    std::map<Word, PbwElem> norm_cache_;
    std::map<std::tuple<int, long, int, long>, PbwElem> swap_cache_;

    PbwMonomial monomial_of(const Word& w) const {
        PbwMonomial m;
        m.f.assign(s_, 0);
        m.b.assign(g_.rs.rank, 0);
        m.e.assign(s_, 0);
        for (const auto& fa : w) {
            if (is_neg(fa.code)) m.f[fa.code] += fa.exp;
            else if (is_toral(fa.code)) m.b[fa.code - s_] += fa.exp;
            else m.e[fa.code - s_ - g_.rs.rank] += fa.exp;
        }
        return m;
    }

    // kind/index of the Lie basis element behind a factor code
    std::pair<int, std::size_t> decode(int code) const {
        if (is_neg(code)) return {0, static_cast<std::size_t>(code)};
        if (is_toral(code)) return {1, static_cast<std::size_t>(code - s_)};
        return {2, static_cast<std::size_t>(code - s_ - g_.rs.rank)};
    }

    int encode(int kind, std::size_t idx) const {
        if (kind == 0) return code_neg(idx);
        if (kind == 1) return code_toral(static_cast<int>(idx));
        return code_pos(idx);
    }

    PbwElem normalize(const Word& w) {
        auto cached = norm_cache_.find(w);
        if (cached != norm_cache_.end()) return cached->second;

        PbwElem result;
        bool rewritten = false;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            const Factor &u = w[i], &v = w[i + 1];
            if (u.code == v.code) {
                // merge: divided powers pick up binom(e1+e2, e1); torals are
                // ordinary powers so the coefficient is 1
                Word nw(w.begin(), w.begin() + i);
                nw.push_back({u.code, u.exp + v.exp});
                nw.insert(nw.end(), w.begin() + i + 2, w.end());
                Rat coef = is_toral(u.code) ? Rat(1) : Rat(binom(Int(u.exp + v.exp), u.exp));
                for (const auto& [m, c] : normalize(nw)) elem_add(result, m, coef * c);
                rewritten = true;
                break;
            }
            if (u.code > v.code) {
                PbwElem sw = pair_swap(u, v);
                for (const auto& [m, c] : sw) {
                    Word nw(w.begin(), w.begin() + i);
                    Word mid = to_word(m);
                    nw.insert(nw.end(), mid.begin(), mid.end());
                    nw.insert(nw.end(), w.begin() + i + 2, w.end());
                    for (const auto& [m2, c2] : normalize(nw)) elem_add(result, m2, c * c2);
                }
                rewritten = true;
                break;
            }
        }
        if (!rewritten) {
            result.emplace(monomial_of(w), Rat(1));
        }
        norm_cache_.emplace(w, result);
        return result;
    }

    // Ordered expansion of x_u^(eu) x_v^(ev) for code(u) > code(v).
    PbwElem pair_swap(const Factor& u, const Factor& v) {
        auto key = std::make_tuple(u.code, u.exp, v.code, v.exp);
        auto cached = swap_cache_.find(key);
        if (cached != swap_cache_.end()) return cached->second;

        PbwElem result;
        auto [ku, iu] = decode(u.code);
        auto [kv, iv] = decode(v.code);

        if (ku == 1 && kv == 1) {
            Word w{v, u};
            result.emplace(monomial_of(w), Rat(1));
        } else if (ku == 1 || kv == 1) {
            // toral past a root power: h^m x^(n) = x^(n) (h + n wt)^m and
            // x^(n) h^m = (h - n wt)^m x^(n); both expand binomially
            const Factor& hroot = (ku == 1) ? v : u;
            const Factor& htor = (ku == 1) ? u : v;
            auto [kr, ir] = decode(hroot.code);
            SRoot rt{ir, kr == 0};
            int ti = static_cast<int>(decode(htor.code).second);
            long wt = g_.root_eval(rt, ti);
            long shift = (ku == 1) ? hroot.exp * wt : -hroot.exp * wt;
            long m = htor.exp;
            // expand (h + shift)^m = sum_j binom(m,j) shift^(m-j) h^j
            for (long j = 0; j <= m; ++j) {
                Rat c = Rat(binom(Int(m), j)) * Rat(ipow(Int(shift), m - j));
                if (c == 0) continue;
                Word w;
                if (ku == 1) { // result ordered as x^(n) h^j only if x negative
                    w.push_back(hroot);
                    if (j > 0) w.push_back({htor.code, j});
                } else {
                    if (j > 0) w.push_back({htor.code, j});
                    w.push_back(hroot);
                }
                for (const auto& [mm, cc] : normalize(w)) elem_add(result, mm, c * cc);
            }
        } else {
            // two root powers: peel one factor off the right power, then
            // x^(k) y = sum_j (ad_x^(j) y) x^(k-j) moves x past it
            long k = u.exp, n = v.exp;
            LieElem z{LieTerm{kv, iv, Rat(1)}};
            for (long j = 0; j <= k && !z.empty(); ++j) {
                for (const auto& t : z) {
                    Word full;
                    full.push_back({encode(t.kind, t.idx), 1});
                    if (k - j > 0) full.push_back({u.code, k - j});
                    if (n - 1 > 0) full.push_back({v.code, n - 1});
                    Rat c = t.coeff / Rat(n);
                    for (const auto& [mm, cc] : normalize(full)) elem_add(result, mm, c * cc);
                }
                LieElem nz;
                {
                    std::map<std::pair<int, std::size_t>, Rat> acc;
                    for (const auto& t : z)
                        for (const auto& bterm : g_.bracket(ku, iu, t.kind, t.idx)) {
                            acc[{bterm.kind, bterm.idx}] += t.coeff * bterm.coeff / Rat(j + 1);
                        }
                    for (auto& [kk, cc] : acc)
                        if (cc != 0) nz.push_back(LieTerm{kk.first, kk.second, cc});
                }
                z = std::move(nz);
            }
        }
        swap_cache_.emplace(key, result);
        return result;
    }

    // Rewrites the toral block of one monomial between power and binomial
    // bases, one variable at a time.
    void expand_toral(const PbwMonomial& m, const Rat& c, int var, std::vector<long> cur,
                      PbwElem& out, bool to_binom) const {
        if (var == g_.rs.rank) {
            PbwMonomial mm = m;
            mm.b = cur;
            elem_add(out, mm, c);
            return;
        }
        long mexp = m.b[var];
        if (mexp == 0) {
            expand_toral(m, c, var + 1, cur, out, to_binom);
            return;
        }
        if (to_binom) {
            // h^m = sum_j S2(m,j) j! binom(h,j)
            std::vector<Int> s2(mexp + 1, 0);
            {
                // S2(m, j) column via the triangular recurrence
                std::vector<std::vector<Int>> t(mexp + 1, std::vector<Int>(mexp + 1, 0));
                t[0][0] = 1;
                for (long i = 1; i <= mexp; ++i)
                    for (long j = 1; j <= i; ++j)
                        t[i][j] = t[i - 1][j - 1] + j * t[i - 1][j];
                for (long j = 0; j <= mexp; ++j) s2[j] = t[mexp][j];
            }
            for (long j = 0; j <= mexp; ++j) {
                if (s2[j] == 0) continue;
                auto cc = c * Rat(s2[j] * factorial(j));
                auto cur2 = cur;
                cur2[var] = j;
                expand_toral(m, cc, var + 1, cur2, out, to_binom);
            }
        } else {
            // binom(h,m) = (1/m!) sum_t s1(m,t) h^t  (signed first kind)
            std::vector<std::vector<Int>> s1(mexp + 1, std::vector<Int>(mexp + 1, 0));
            s1[0][0] = 1;
            for (long i = 1; i <= mexp; ++i)
                for (long t = 0; t <= i; ++t)
                    s1[i][t] = (t > 0 ? s1[i - 1][t - 1] : Int(0)) - Int(i - 1) * s1[i - 1][t];
            for (long t = 0; t <= mexp; ++t) {
                if (s1[mexp][t] == 0) continue;
                auto cc = c * Rat(s1[mexp][t]) / Rat(factorial(mexp));
                auto cur2 = cur;
                cur2[var] = t;
                expand_toral(m, cc, var + 1, cur2, out, to_binom);
            }
        }
    }
};

} // namespace chevtrunc
