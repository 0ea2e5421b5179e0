#pragma once

// Root systems of types A,B,C,D,G up to rank 4: Cartan data, the positive
// system computed by reflection closure, heights, coroots, and the weight
// pairings everything downstream leans on. Weights are always handled in
// fundamental-weight coordinates; roots carry simple-root coordinates.

#include "chevtrunc/linalg.hpp"

#include <map>
#include <string>

namespace chevtrunc {

struct PosRoot {
    std::vector<long> c;      // simple-root coordinates, all >= 0
    long ht = 0;              // coordinate sum
    std::vector<Int> omega;   // fundamental-weight coordinates
    std::vector<Int> coroot;  // coroot in the simple-coroot basis
};

struct RootSystem {
    char type = 'A';
    int rank = 0;
    Mat<Int> cartan;              // column j = alpha_j in fundamental-weight coords
    std::vector<long> d;          // symmetrizers, shortest root normalized to 1
    std::vector<PosRoot> pos;     // sorted by (height, lex coords)
    std::map<std::vector<long>, std::size_t> pos_index;

    // <mu, alpha_i^vee> for a weight in fundamental coords: just coordinate i.
    // <beta, alpha_i^vee> for beta in root coords: row i of the Cartan matrix.
    long pairing_root_simple_coroot(const std::vector<long>& c, int i) const {
        Int s = 0;
        for (int j = 0; j < rank; ++j) s += cartan(i, j) * c[j];
        return static_cast<long>(s);
    }

    bool is_positive_root(const std::vector<long>& c) const { return pos_index.count(c) != 0; }

    // Index of +-root c among positives; negatives are looked up by negation.
    std::optional<std::size_t> find_positive(const std::vector<long>& c) const {
        auto it = pos_index.find(c);
        if (it == pos_index.end()) return std::nullopt;
        return it->second;
    }
};

namespace detail {

inline Mat<Int> cartan_matrix(char type, int rank) {
    Mat<Int> a(rank, rank);
    for (int i = 0; i < rank; ++i) a(i, i) = 2;
    auto link = [&](int i, int j) { a(i, j) = -1; a(j, i) = -1; };
    switch (type) {
    case 'A':
        for (int i = 0; i + 1 < rank; ++i) link(i, i + 1);
        break;
    case 'B': // alpha_rank short: <alpha_{n-1}, alpha_n^vee> = -2
        for (int i = 0; i + 1 < rank; ++i) link(i, i + 1);
        a(rank - 1, rank - 2) = -2;
        break;
    case 'C': // alpha_rank long
        for (int i = 0; i + 1 < rank; ++i) link(i, i + 1);
        a(rank - 2, rank - 1) = -2;
        break;
    case 'D':
        for (int i = 0; i + 2 < rank; ++i) link(i, i + 1);
        link(rank - 3, rank - 1);
        break;
    case 'G': // alpha_1 short, alpha_2 long
        a(0, 1) = -3;
        a(1, 0) = -1;
        break;
    default:
        throw std::invalid_argument("unsupported type");
    }
    return a;
}

inline void validate_datum(char type, int rank) {
    auto fail = [&] {
        throw std::invalid_argument(std::string("unsupported Cartan datum ") + type + std::to_string(rank));
    };
    switch (type) {
    case 'A': if (rank < 1 || rank > 4) fail(); break;
    case 'B': case 'C': if (rank < 2 || rank > 4) fail(); break;
    case 'D': if (rank < 3 || rank > 4) fail(); break;
    case 'G': if (rank != 2) fail(); break;
    default: fail();
    }
}

} // namespace detail

inline RootSystem build_root_system(char type, int rank) {
    detail::validate_datum(type, rank);
    RootSystem rs;
    rs.type = type;
    rs.rank = rank;
    rs.cartan = detail::cartan_matrix(type, rank);

    // Symmetrizers: smallest positive integers with d_i A(i,j) = d_j A(j,i);
    // propagate ratios along Dynkin edges, then clear denominators.
    {
        std::vector<Rat> dr(rank, Rat(0));
        dr[0] = 1;
        bool changed = true;
        while (changed) {
            changed = false;
            for (int i = 0; i < rank; ++i)
                for (int j = 0; j < rank; ++j) {
                    if (i == j || rs.cartan(i, j) == 0) continue;
                    if (dr[i] != 0 && dr[j] == 0) {
                        dr[j] = dr[i] * Rat(rs.cartan(i, j)) / Rat(rs.cartan(j, i));
                        changed = true;
                    }
                }
        }
        Int lcm_den = 1;
        for (auto& x : dr) lcm_den = boost::multiprecision::lcm(lcm_den, rat_den(x));
        Int g = 0;
        std::vector<Int> di(rank);
        for (int i = 0; i < rank; ++i) {
            di[i] = to_int(dr[i] * lcm_den);
            g = boost::multiprecision::gcd(g, di[i]);
        }
        rs.d.resize(rank);
        for (int i = 0; i < rank; ++i) rs.d[i] = static_cast<long>(di[i] / g);
    }

    // Reflection closure of the simple roots; simple reflections act on
    // root coordinates by s_i(c) = c - <c, alpha_i^vee> e_i.
    std::map<std::vector<long>, bool> seen;
    std::vector<std::vector<long>> work;
    for (int i = 0; i < rank; ++i) {
        std::vector<long> e(rank, 0);
        e[i] = 1;
        seen[e] = true;
        work.push_back(e);
    }
    while (!work.empty()) {
        auto c = work.back();
        work.pop_back();
        for (int i = 0; i < rank; ++i) {
            long k = rs.pairing_root_simple_coroot(c, i);
            auto c2 = c;
            c2[i] -= k;
            if (!seen.count(c2)) {
                seen[c2] = true;
                work.push_back(c2);
            }
        }
    }

    std::vector<PosRoot> ps;
    for (auto& [c, _] : seen) {
        bool pos = true, nonzero = false;
        for (long x : c) {
            if (x < 0) pos = false;
            if (x != 0) nonzero = true;
        }
        if (!pos || !nonzero) continue;
        PosRoot r;
        r.c = c;
        for (long x : c) r.ht += x;
        r.omega.resize(rank);
        for (int i = 0; i < rank; ++i) {
            Int s = 0;
            for (int j = 0; j < rank; ++j) s += rs.cartan(i, j) * c[j];
            r.omega[i] = s;
        }
        // d_beta = (beta,beta)/2 with (alpha_i,alpha_j) = d_i A(i,j);
        // coroot coords c_i d_i / d_beta are integers for any root.
        Rat dbeta = 0;
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                dbeta += Rat(rs.d[i] * rs.cartan(i, j) * c[i] * c[j]);
        dbeta /= 2;
        r.coroot.resize(rank);
        for (int i = 0; i < rank; ++i) r.coroot[i] = to_int(Rat(c[i] * rs.d[i]) / dbeta);
        ps.push_back(std::move(r));
    }
    std::sort(ps.begin(), ps.end(), [](const PosRoot& x, const PosRoot& y) {
        if (x.ht != y.ht) return x.ht < y.ht;
        return x.c < y.c;
    });
    rs.pos = std::move(ps);
    for (std::size_t i = 0; i < rs.pos.size(); ++i) rs.pos_index[rs.pos[i].c] = i;
    return rs;
}

inline RootSystem build_root_system(const std::string& name) {
    if (name.size() < 2) throw std::invalid_argument("Cartan datum must look like A2, B3, ...");
    return build_root_system(name[0], std::stoi(name.substr(1)));
}

inline long height(const RootSystem& rs, std::size_t pos_idx) { return rs.pos.at(pos_idx).ht; }

// Coordinates of a weight-lattice vector in the simple-root basis (rational
// in general; integral exactly when the vector lies in the root lattice).
inline std::vector<Rat> root_coordinates(const RootSystem& rs, const std::vector<Int>& omega) {
    Mat<Rat> a = mat_cast<Rat>(rs.cartan);
    std::vector<Rat> b(rs.rank);
    for (int i = 0; i < rs.rank; ++i) b[i] = Rat(omega[i]);
    auto x = solve(a, b);
    if (!x) throw std::logic_error("root_coordinates: Cartan matrix singular");
    return *x;
}

// ht_lambda(mu) = height of lambda - mu; requires lambda - mu in the root
// lattice, which is exactly when the two weights can share a module.
inline Int relative_height(const RootSystem& rs, const std::vector<Int>& lambda,
                           const std::vector<Int>& mu) {
    std::vector<Int> diff(rs.rank);
    for (int i = 0; i < rs.rank; ++i) diff[i] = lambda[i] - mu[i];
    auto c = root_coordinates(rs, diff);
    Rat h = 0;
    for (auto& x : c) {
        if (!is_integer(x)) throw std::domain_error("relative_height: difference not in the root lattice");
        h += x;
    }
    return to_int(h);
}

// Coordinate-wise congruence of weights mod p^M in the fundamental basis.
inline bool weight_congruent(const std::vector<Int>& l1, const std::vector<Int>& l2,
                             long p, long M) {
    if (l1.size() != l2.size()) throw std::invalid_argument("weight_congruent: rank mismatch");
    Int mod = ipow(Int(p), M);
    for (std::size_t i = 0; i < l1.size(); ++i)
        if ((l1[i] - l2[i]) % mod != 0) return false;
    return true;
}

// Invariant pairing (mu, x) with mu in fundamental coords and x in root
// coords: (omega_i, alpha_j) = delta_ij d_j.
inline Rat pair_weight_root(const RootSystem& rs, const std::vector<Int>& mu,
                            const std::vector<Rat>& c) {
    Rat s = 0;
    for (int i = 0; i < rs.rank; ++i) s += Rat(mu[i]) * Rat(rs.d[i]) * c[i];
    return s;
}

inline Rat pair_root_root(const RootSystem& rs, const std::vector<Rat>& c1,
                          const std::vector<Rat>& c2) {
    Rat s = 0;
    for (int i = 0; i < rs.rank; ++i)
        for (int j = 0; j < rs.rank; ++j)
            s += c1[i] * Rat(rs.d[i] * rs.cartan(i, j)) * c2[j];
    return s;
}

inline std::vector<Rat> rat_coords(const std::vector<long>& c) {
    std::vector<Rat> r(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) r[i] = Rat(c[i]);
    return r;
}

} // namespace chevtrunc
