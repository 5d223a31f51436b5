#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "syz/errors.hpp"
#include "syz/field.hpp"

namespace syz {

template <Field K>
struct BranchPoint {
    std::uint32_t comp;
    K param;
    bool operator==(const BranchPoint&) const = default;
};

template <Field K>
struct CurveNode {
    BranchPoint<K> a, b;
    K lambda; // gluing constant; parametrizes line-bundle moduli
};

// Nodal curve glued from rational components, each carrying a coordinate t.
// Immutable after construction; arithmetic genus = #nodes - #components + 1.
template <Field K>
class GluedCurve {
  public:
    GluedCurve(std::uint32_t ncomps, std::vector<CurveNode<K>> nodes,
               std::map<std::string, BranchPoint<K>> marked = {})
        : ncomps_(ncomps), nodes_(std::move(nodes)), marked_(std::move(marked)) {
        validate();
    }

    std::uint32_t ncomps() const { return ncomps_; }
    const std::vector<CurveNode<K>>& nodes() const { return nodes_; }
    const std::map<std::string, BranchPoint<K>>& marked() const { return marked_; }

    int genus() const {
        return static_cast<int>(nodes_.size()) - static_cast<int>(ncomps_) + 1;
    }

    const BranchPoint<K>& marked_point(const std::string& name) const {
        auto it = marked_.find(name);
        if (it == marked_.end())
            throw model_error("curve: no marked point '" + name + "'");
        return it->second;
    }

    // All node branch parameters lying on a component, in node order.
    std::vector<K> branch_params(std::uint32_t comp) const {
        std::vector<K> out;
        for (const auto& n : nodes_) {
            if (n.a.comp == comp)
                out.push_back(n.a.param);
            if (n.b.comp == comp)
                out.push_back(n.b.param);
        }
        return out;
    }

    bool is_node_param(std::uint32_t comp, const K& x) const {
        for (const auto& n : nodes_) {
            if ((n.a.comp == comp && n.a.param == x) ||
                (n.b.comp == comp && n.b.param == x))
                return true;
        }
        return false;
    }

  private:
    void validate() const {
        if (ncomps_ == 0)
            throw model_error("curve: no components");
        std::vector<std::set<K>> seen(ncomps_);
        auto add_param = [&](const BranchPoint<K>& bp) {
            if (bp.comp >= ncomps_)
                throw model_error("curve: branch component out of range");
            if (!seen[bp.comp].insert(bp.param).second)
                throw model_error("curve: coincident node parameters");
        };
        for (const auto& n : nodes_) {
            add_param(n.a);
            add_param(n.b);
            if (n.lambda.is_zero())
                throw model_error("curve: zero gluing constant");
        }
        for (const auto& [name, bp] : marked_) {
            if (bp.comp >= ncomps_)
                throw model_error("curve: marked component out of range");
            if (seen[bp.comp].count(bp.param))
                throw model_error("curve: marked point collides with a node");
        }
        if (genus() < 0)
            throw model_error("curve: negative arithmetic genus");
        // connectivity over components via nodes
        std::vector<std::uint32_t> parent(ncomps_);
        for (std::uint32_t i = 0; i < ncomps_; ++i)
            parent[i] = i;
        auto find = [&](std::uint32_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& n : nodes_)
            parent[find(n.a.comp)] = find(n.b.comp);
        for (std::uint32_t i = 0; i < ncomps_; ++i)
            if (find(i) != find(0))
                throw model_error("curve: disconnected model");
    }

    std::uint32_t ncomps_;
    std::vector<CurveNode<K>> nodes_;
    std::map<std::string, BranchPoint<K>> marked_;
};

// Formal divisor supported on smooth finite points plus a per-component
// multiplicity at infinity (the latter only enters degree bounds).
template <Field K>
class Divisor {
  public:
    Divisor() = default;
    explicit Divisor(std::uint32_t ncomps) : fin_(ncomps), inf_(ncomps, 0) {}

    static Divisor point(std::uint32_t ncomps, const BranchPoint<K>& p, int mult) {
        Divisor d(ncomps);
        d.fin_[p.comp][p.param] = mult;
        d.prune();
        return d;
    }
    static Divisor at_infinity(std::uint32_t ncomps, std::uint32_t comp, int mult) {
        Divisor d(ncomps);
        d.inf_[comp] = mult;
        return d;
    }

    std::uint32_t ncomps() const { return static_cast<std::uint32_t>(fin_.size()); }
    const std::map<K, int>& finite(std::uint32_t comp) const { return fin_[comp]; }
    int infinity(std::uint32_t comp) const { return inf_[comp]; }

    long long degree() const {
        long long d = 0;
        for (const auto& m : fin_)
            for (const auto& [pt, mult] : m)
                d += mult;
        for (int m : inf_)
            d += m;
        return d;
    }

    Divisor operator+(const Divisor& o) const {
        check(o);
        Divisor r = *this;
        for (std::uint32_t c = 0; c < r.ncomps(); ++c) {
            for (const auto& [pt, mult] : o.fin_[c])
                r.fin_[c][pt] += mult;
            r.inf_[c] += o.inf_[c];
        }
        r.prune();
        return r;
    }
    Divisor operator-() const {
        Divisor r = *this;
        for (auto& m : r.fin_)
            for (auto& [pt, mult] : m)
                mult = -mult;
        for (auto& m : r.inf_)
            m = -m;
        return r;
    }
    Divisor operator-(const Divisor& o) const { return *this + (-o); }
    Divisor operator*(int k) const {
        Divisor r = *this;
        for (auto& m : r.fin_)
            for (auto& [pt, mult] : m)
                mult *= k;
        for (auto& m : r.inf_)
            m *= k;
        r.prune();
        return r;
    }

    bool operator==(const Divisor& o) const {
        return fin_ == o.fin_ && inf_ == o.inf_;
    }
    bool operator<(const Divisor& o) const {
        if (inf_ != o.inf_)
            return inf_ < o.inf_;
        return fin_ < o.fin_;
    }

  private:
    void check(const Divisor& o) const {
        if (o.fin_.size() != fin_.size())
            throw model_error("divisor: component count mismatch");
    }
    void prune() {
        for (auto& m : fin_)
            std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
    }

    std::vector<std::map<K, int>> fin_;
    std::vector<int> inf_;
};

// Twisted power of the dualizing sheaf: omega^m(div), glued at each node by
// lambda^k. User-facing constructions keep m in {0,1}; tensor powers needed
// for multiplication maps push m outside that range internally.
template <Field K>
struct SheafSpec {
    int omega_exp = 0;
    int lambda_exp = 0;
    Divisor<K> div;

    static SheafSpec structure(std::uint32_t ncomps) {
        return {0, 0, Divisor<K>(ncomps)};
    }
    static SheafSpec dualizing(std::uint32_t ncomps) {
        return {1, 0, Divisor<K>(ncomps)};
    }
    static SheafSpec bundle(Divisor<K> d) { // generic moduli: glues by lambda
        return {0, 1, std::move(d)};
    }

    SheafSpec tensor(const SheafSpec& o) const {
        return {omega_exp + o.omega_exp, lambda_exp + o.lambda_exp, div + o.div};
    }
    SheafSpec power(int q) const {
        return {omega_exp * q, lambda_exp * q, div * q};
    }
    SheafSpec twisted(const Divisor<K>& d) const {
        return {omega_exp, lambda_exp, div + d};
    }
    SheafSpec serre_dual() const {
        return {1 - omega_exp, -lambda_exp, -div};
    }

    long long degree(const GluedCurve<K>& X) const {
        return static_cast<long long>(omega_exp) * (2 * X.genus() - 2) +
               div.degree();
    }

    bool operator==(const SheafSpec& o) const {
        return omega_exp == o.omega_exp && lambda_exp == o.lambda_exp &&
               div == o.div;
    }
    bool operator<(const SheafSpec& o) const {
        if (omega_exp != o.omega_exp)
            return omega_exp < o.omega_exp;
        if (lambda_exp != o.lambda_exp)
            return lambda_exp < o.lambda_exp;
        return div < o.div;
    }
};

// --- model builders ---------------------------------------------------------

template <Field K>
K fresh_param(Rng& rng, const std::set<K>& used) {
    for (int tries = 0; tries < 10000; ++tries) {
        K x = random_scalar<K>(rng);
        if (!used.count(x))
            return x;
    }
    throw internal_error("fresh_param: exhausted draws");
}

template <Field K>
std::set<K> used_params(const GluedCurve<K>& X, std::uint32_t comp) {
    std::set<K> used;
    for (const K& x : X.branch_params(comp))
        used.insert(x);
    for (const auto& [name, bp] : X.marked())
        if (bp.comp == comp)
            used.insert(bp.param);
    return used;
}

// Irreducible g-nodal rational curve: one component, g nodes with random
// distinct parameters and random nonzero gluing constants.
template <Field K>
GluedCurve<K> random_nodal_curve(int g, Rng& rng) {
    if (g < 0)
        throw infeasible_error("random_nodal_curve: negative genus");
    std::vector<CurveNode<K>> nodes;
    std::set<K> used;
    for (int i = 0; i < g; ++i) {
        K a = fresh_param(rng, used);
        used.insert(a);
        K b = fresh_param(rng, used);
        used.insert(b);
        nodes.push_back({{0, a}, {0, b}, random_nonzero<K>(rng)});
    }
    return GluedCurve<K>(1, std::move(nodes));
}

// P^1 with the degree-d bundle O(d * infinity): sections are the polynomials
// of degree <= d, so the embedding is the rational normal curve.
template <Field K>
std::pair<GluedCurve<K>, SheafSpec<K>> rational_normal_model(int d) {
    GluedCurve<K> X(1, {});
    SheafSpec<K> L = SheafSpec<K>::bundle(Divisor<K>::at_infinity(1, 0, d));
    return {std::move(X), std::move(L)};
}

// d distinct random smooth finite points, multiplicity one each.
template <Field K>
Divisor<K> random_effective_divisor(const GluedCurve<K>& X, int deg, Rng& rng) {
    Divisor<K> D(X.ncomps());
    std::vector<std::set<K>> used(X.ncomps());
    for (std::uint32_t c = 0; c < X.ncomps(); ++c)
        used[c] = used_params(X, c);
    for (int i = 0; i < deg; ++i) {
        auto comp = static_cast<std::uint32_t>(rng.below(X.ncomps()));
        K x = fresh_param(rng, used[comp]);
        used[comp].insert(x);
        D = D + Divisor<K>::point(X.ncomps(), {comp, x}, 1);
    }
    return D;
}

} // namespace syz
