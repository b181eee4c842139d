#include "stf/rootsys.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "json_util.hpp"

namespace stf {

using detail::json;

namespace {

struct TypeSpec {
    QMat form;
    bool has_roots = true;
};

QMat form_of(std::initializer_list<std::initializer_list<long>> rows) {
    QMat m;
    for (auto r : rows) {
        QVec v;
        for (long x : r) v.push_back(Q(x));
        m.push_back(v);
    }
    return m;
}

TypeSpec spec_for(const std::string& t) {
    if (t == "A1") return {form_of({{2}})};
    if (t == "A1xA1") return {form_of({{2, 0}, {0, 2}})};
    if (t == "A2") return {form_of({{2, -1}, {-1, 2}})};
    if (t == "B2") return {form_of({{2, -1}, {-1, 1}})};  // a1 long, a2 short
    if (t == "C2") return {form_of({{1, -1}, {-1, 2}})};  // a1 short, a2 long
    if (t == "G2") return {form_of({{2, -3}, {-3, 6}})};  // a1 short, a2 long
    if (t == "T1") return {form_of({{2}}), false};        // rank-one torus
    throw UnsupportedCartanType("'" + t + "' is not in the supported catalog (A1, A1xA1, A2, B2, C2, G2, T1)");
}

std::string mat_key(const QMat& m) {
    std::string k;
    for (const auto& r : m)
        for (const auto& x : r) k += x.get_str() + ",";
    return k;
}

}  // namespace

std::string canonical_cartan_type(const std::string& type) {
    if (type == "A1×A1" || type == "A1*A1" || type == "A1+A1") return "A1xA1";
    if (type == "B2/C2") return "B2";
    return type;
}

Q RootDatum::pair(const QVec& a, const QVec& b) const {
    Q s = 0;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            if (form[i][j] != 0) s += a[i] * form[i][j] * b[j];
    return s;
}

Q RootDatum::coroot_pairing(const QVec& v, int root) const { return pair(v, coroots[root]); }

int RootDatum::root_index(const QVec& v) const {
    auto it = index_.find(v);
    return it == index_.end() ? -1 : it->second;
}

QVec RootDatum::reflect(int root, const QVec& v) const {
    return v - coroot_pairing(v, root) * roots[root];
}

QVec RootDatum::rho() const {
    QVec r(rank, 0);
    for (size_t i = 0; i < roots.size(); ++i)
        if (base_positive >> i & 1) r = r + roots[i];
    return Q(1, 2) * r;
}

std::vector<int> RootDatum::reflection_perm(int root) const {
    std::vector<int> p(roots.size());
    for (size_t i = 0; i < roots.size(); ++i) p[i] = root_index(reflect(root, roots[i]));
    return p;
}

int RootDatum::positive_system_index(RootMask m) const {
    for (size_t i = 0; i < positive.size(); ++i)
        if (positive[i].mask == m) return static_cast<int>(i);
    return -1;
}

RootDatum build_root_datum_impl(const std::string& type_in) {
    std::string type = canonical_cartan_type(type_in);
    TypeSpec spec = spec_for(type);
    RootDatum d;
    d.cartan_type = type;
    d.form = spec.form;
    d.rank = static_cast<int>(spec.form.size());
    int r = d.rank;

    auto coroot_of = [&](const QVec& a) { return (Q(2) / d.pair(a, a)) * a; };

    std::vector<QVec> simple;
    for (int i = 0; i < r; ++i) {
        QVec e(r, 0);
        e[i] = 1;
        simple.push_back(e);
    }

    std::set<QVec, QVecLess> found;
    if (spec.has_roots) {
        std::deque<QVec> work;
        for (const auto& s : simple) {
            found.insert(s);
            work.push_back(s);
        }
        while (!work.empty()) {
            QVec v = work.front();
            work.pop_front();
            for (const auto& s : simple) {
                QVec sv = coroot_of(s);
                QVec w = v - d.pair(v, sv) * s;
                if (found.insert(w).second) work.push_back(w);
            }
        }
    }
    d.roots.assign(found.begin(), found.end());
    for (size_t i = 0; i < d.roots.size(); ++i) {
        d.index_[d.roots[i]] = static_cast<int>(i);
        d.coroots.push_back(coroot_of(d.roots[i]));
        d.all_roots |= RootMask(1) << i;
    }
    d.negative.resize(d.roots.size());
    for (size_t i = 0; i < d.roots.size(); ++i) {
        d.negative[i] = d.root_index(-d.roots[i]);
        bool pos = true;
        for (const auto& x : d.roots[i])
            if (x < 0) pos = false;
        if (pos) d.base_positive |= RootMask(1) << i;
    }
    if (spec.has_roots)
        for (const auto& s : simple) d.simple_roots.push_back(d.root_index(s));

    // fundamental weights: X A^T = I with A_jk = <a_k, a_j^vee>
    if (spec.has_roots) {
        QMat a(r, QVec(r));
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k) a[j][k] = d.pair(simple[k], coroot_of(simple[j]));
        d.weight_lattice_basis = inverse(transpose(a));
    } else {
        d.weight_lattice_basis = QMat(r, QVec(r, 0));
        for (int i = 0; i < r; ++i) d.weight_lattice_basis[i][i] = Q(2) / d.form[i][i];
    }

    // Weyl group by breadth-first search on right multiplication
    std::vector<QMat> sref;
    if (spec.has_roots)
        for (int i = 0; i < r; ++i) {
            QMat m(r, QVec(r));
            for (int j = 0; j < r; ++j) {
                QVec img = d.reflect(d.simple_roots[i], simple[j]);
                for (int k = 0; k < r; ++k) m[k][j] = img[k];
            }
            sref.push_back(m);
        }
    std::map<std::string, int> seen;
    WeylElement id;
    id.matrix = identity(r);
    id.sign = 1;
    d.weyl.push_back(id);
    seen[mat_key(id.matrix)] = 0;
    for (size_t head = 0; head < d.weyl.size(); ++head) {
        for (int i = 0; i < static_cast<int>(sref.size()); ++i) {
            QMat m = mat_mul(d.weyl[head].matrix, sref[i]);
            std::string key = mat_key(m);
            if (seen.count(key)) continue;
            WeylElement w;
            w.matrix = m;
            w.word = d.weyl[head].word;
            w.word.push_back(i);
            w.sign = -d.weyl[head].sign;
            seen[key] = static_cast<int>(d.weyl.size());
            d.weyl.push_back(w);
        }
    }
    for (auto& w : d.weyl) {
        Q dt = det(w.matrix);
        if (dt != w.sign) throw InternalAxiomConflict("Weyl sign disagrees with determinant");
        w.perm.resize(d.roots.size());
        for (size_t i = 0; i < d.roots.size(); ++i) w.perm[i] = d.root_index(mat_vec(w.matrix, d.roots[i]));
    }

    QVec rho = d.rho();
    for (const auto& w : d.weyl) {
        PositiveSystem p;
        for (size_t i = 0; i < d.roots.size(); ++i)
            if (d.base_positive >> i & 1) {
                int j = w.perm[i];
                p.mask |= RootMask(1) << j;
            }
        for (size_t i = 0; i < d.roots.size(); ++i)
            if (p.mask >> i & 1) p.positive_roots.push_back(static_cast<int>(i));
        p.chamber_point = mat_vec(w.matrix, rho);
        if (!spec.has_roots) p.chamber_point = QVec(r, 0);
        d.positive.push_back(p);
    }
    return d;
}

RootDatumPtr build_root_datum(const std::string& cartan_type) {
    static std::mutex mu;
    static std::map<std::string, RootDatumPtr> cache;
    std::string t = canonical_cartan_type(cartan_type);
    spec_for(t);  // validates
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(t);
    if (it != cache.end()) return it->second;
    auto p = std::make_shared<const RootDatum>(build_root_datum_impl(t));
    cache[t] = p;
    return p;
}

const std::vector<WeylElement>& weyl_group(const RootDatum& d) { return d.weyl; }

bool contains_minus_one(const RootDatum& d) {
    QMat neg = identity(d.rank);
    for (auto& r : neg)
        for (auto& x : r) x = -x;
    for (const auto& w : d.weyl)
        if (w.matrix == neg) return true;
    return false;
}

const std::vector<PositiveSystem>& positive_systems(const RootDatum& d) { return d.positive; }

bool TorusPoint::exact() const {
    for (double x : real)
        if (x != 0.0) return false;
    for (double x : drift)
        if (x != 0.0) return false;
    return true;
}

TorusPoint make_point(const QVec& turns, const std::string& component) {
    TorusPoint p;
    p.component = component;
    p.turns = turns;
    return p;
}

RootValue vector_value(const RootDatum& d, const QVec& v, const TorusPoint& h) {
    RootValue rv;
    rv.turns = d.pair(v, h.turns);
    for (int i = 0; i < d.rank; ++i) {
        double br = 0, bd = 0;
        for (int j = 0; j < d.rank; ++j) {
            double f = d.form[i][j].get_d();
            br += f * h.real_at(j);
            bd += f * h.drift_at(j);
        }
        rv.real += v[i].get_d() * br;
        rv.drift += v[i].get_d() * bd;
    }
    return rv;
}

RootValue root_value(const RootDatum& d, int root, const TorusPoint& h) {
    return vector_value(d, d.roots[root], h);
}

bool is_regular_for(const RootDatum& d, RootMask roots, const TorusPoint& h) {
    if (static_cast<int>(h.turns.size()) != d.rank) throw InputError("torus point has the wrong dimension");
    for (size_t i = 0; i < d.roots.size(); ++i) {
        if (!(roots >> i & 1)) continue;
        if (root_value(d, static_cast<int>(i), h).trivial_exponential()) return false;
    }
    return true;
}

bool is_regular(const RootDatum& d, const TorusPoint& h) { return is_regular_for(d, d.all_roots, h); }

TorusPoint act(const WeylElement& w, const TorusPoint& h) {
    TorusPoint r = h;
    r.turns = mat_vec(w.matrix, h.turns);
    auto move = [&](const std::vector<double>& in, std::vector<double>& out) {
        if (in.empty()) return;
        out.assign(h.turns.size(), 0.0);
        for (size_t i = 0; i < h.turns.size(); ++i)
            for (size_t j = 0; j < h.turns.size(); ++j)
                out[i] += w.matrix[i][j].get_d() * (j < in.size() ? in[j] : 0.0);
    };
    move(h.real, r.real);
    move(h.drift, r.drift);
    return r;
}

TorusPoint displaced(const TorusPoint& h, double t, const QVec& direction_turns, const QVec& direction_real) {
    TorusPoint r = h;
    size_t n = h.turns.size();
    r.real.resize(n, 0.0);
    r.drift.resize(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        if (i < direction_real.size()) r.real[i] = h.real_at(i) + t * direction_real[i].get_d();
        if (i < direction_turns.size()) r.drift[i] = h.drift_at(i) + t * direction_turns[i].get_d();
    }
    return r;
}

Value exp_value(const Q& turns, double real) { return exp_value(RootValue{turns, 0.0, real}); }

Value exp_value(const RootValue& v) {
    if (v.exact()) return Value(Cyc::exp_turns(v.turns));
    const double tau = 6.283185307179586476925286766559;
    Q frac = v.turns - Q(mpz_class(v.turns.get_num() / v.turns.get_den()));
    double ang = tau * (frac.get_d() + v.drift);
    return Value::numeric(std::exp(v.real) * std::complex<double>(std::cos(ang), std::sin(ang)));
}

Value weyl_discriminant(const RootDatum& d, RootMask positive, const TorusPoint& h) {
    Value prod(1);
    for (size_t i = 0; i < d.roots.size(); ++i) {
        if (!(positive >> i & 1)) continue;
        RootValue v = root_value(d, static_cast<int>(i), h);
        if (v.trivial_exponential()) throw SingularPoint("root " + to_string(d.roots[i]) + " is singular at H");
        RootValue half{v.turns / 2, v.drift / 2, v.real / 2};
        RootValue neg{-half.turns, -half.drift, -half.real};
        prod *= exp_value(half) - exp_value(neg);
    }
    return prod;
}

Value weyl_discriminant(const RootDatum& d, const PositiveSystem& p, const TorusPoint& h) {
    return weyl_discriminant(d, p.mask, h);
}

// ---- catalog ----

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const LeviEntry& GroupEntry::levi(const std::string& l) const {
    for (const auto& m : levis)
        if (m.label == l) return m;
    throw UnknownLevi("group " + label + " has no Levi '" + l + "'");
}

const ComponentElement& GroupEntry::component(const std::string& l) const {
    for (const auto& c : components)
        if (c.label == l) return c;
    throw InputError("group " + label + " has no component '" + l + "' in Z(B)");
}

namespace {

int weyl_index_of_word(const RootDatum& d, const std::vector<int>& word) {
    QMat m = identity(d.rank);
    for (int i : word) {
        if (i < 0 || i >= static_cast<int>(d.simple_roots.size())) throw SchemaError("bad reflection index in word");
        for (const auto& w : d.weyl)
            if (w.word == std::vector<int>{i}) m = mat_mul(m, w.matrix);
    }
    for (size_t k = 0; k < d.weyl.size(); ++k)
        if (d.weyl[k].matrix == m) return static_cast<int>(k);
    throw SchemaError("word does not give a Weyl element");
}

}  // namespace

std::vector<int> GroupEntry::compact_weyl() const {
    const RootDatum& d = *datum;
    std::vector<int> r{0};
    std::vector<std::vector<int>> gens;
    for (size_t i = 0; i < d.roots.size(); ++i)
        if (compact_roots >> i & 1) gens.push_back(d.reflection_perm(static_cast<int>(i)));
    for (size_t h = 0; h < r.size(); ++h)
        for (const auto& g : gens) {
            std::vector<int> p(d.roots.size());
            for (size_t i = 0; i < p.size(); ++i) p[i] = g[d.weyl[r[h]].perm[i]];
            for (size_t k = 0; k < d.weyl.size(); ++k)
                if (d.weyl[k].perm == p && std::find(r.begin(), r.end(), static_cast<int>(k)) == r.end())
                    r.push_back(static_cast<int>(k));
        }
    std::sort(r.begin(), r.end());
    return r;
}

std::vector<int> GroupEntry::member_cosets() const {
    const auto& W = datum->weyl;
    auto wk = compact_weyl();
    std::vector<int> reps;
    std::vector<bool> covered(W.size(), false);
    for (size_t w = 0; w < W.size(); ++w) {
        if (covered[w]) continue;
        reps.push_back(static_cast<int>(w));
        for (int u : wk) {
            QMat m = mat_mul(W[u].matrix, W[w].matrix);
            for (size_t k = 0; k < W.size(); ++k)
                if (W[k].matrix == m) covered[k] = true;
        }
    }
    return reps;
}

const GroupEntry& GroupCatalog::group(const std::string& label) const {
    for (const auto& g : groups)
        if (g.label == label) return g;
    throw BrokenReference("no group '" + label + "' in the group catalog");
}

bool GroupCatalog::has(const std::string& label) const {
    for (const auto& g : groups)
        if (g.label == label) return true;
    return false;
}

namespace {

RootMask parse_root_set(const json& j, const RootDatum& d, const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "all") return d.all_roots;
        if (j.get<std::string>() == "none") return 0;
        throw SchemaError(where + ": root set must be \"all\", \"none\" or a list");
    }
    RootMask m = 0;
    for (const auto& v : j) {
        QVec r = detail::to_qvec(v, where);
        int i = static_cast<int>(r.size()) == d.rank ? d.root_index(r) : -1;
        if (i < 0) throw SchemaError(where + ": " + to_string(r) + " is not a root");
        m |= RootMask(1) << i;
    }
    return m;
}

std::vector<std::vector<int>> parse_words(const json& j, const std::string& where) {
    std::vector<std::vector<int>> r;
    if (!j.is_array()) throw SchemaError(where + ": expected a list of words");
    for (const auto& w : j) {
        std::vector<int> word;
        for (const auto& x : w) word.push_back(detail::to_int(x, where));
        r.push_back(word);
    }
    return r;
}

}  // namespace

GroupCatalog load_group_catalog_text(const std::string& text) {
    json doc = detail::parse_json(text, "group catalog");
    detail::check_schema(doc, "rootsys/1");
    GroupCatalog cat;
    for (const auto& g : detail::need(doc, "groups", "group catalog")) {
        GroupEntry e;
        e.label = detail::to_str(detail::need(g, "label", "group"), "group.label");
        std::string where = "group " + e.label;
        e.cartan_type = canonical_cartan_type(detail::to_str(detail::need(g, "cartan_type", where), where));
        try {
            e.datum = build_root_datum(e.cartan_type);
        } catch (const UnsupportedCartanType& ex) {
            throw SchemaError(where + ": " + ex.what());
        }
        const RootDatum& d = *e.datum;
        e.real_form = detail::to_str(detail::need(g, "real_form", where), where);
        e.compact = detail::to_bool(detail::need(g, "compact", where), where);
        e.q = detail::to_int(detail::need(g, "q", where), where);
        if (g.contains("character_lattice")) e.character_lattice = detail::to_str(g.at("character_lattice"), where);
        if (e.character_lattice != "weight" && e.character_lattice != "root")
            throw SchemaError(where + ": character_lattice must be weight or root");
        for (const auto& c : detail::need(g, "component_group", where)) {
            ComponentElement ce;
            ce.label = detail::to_str(detail::need(c, "label", where), where);
            if (c.contains("log_turns")) {
                ce.has_log = true;
                ce.log_turns = detail::to_qvec(c.at("log_turns"), where);
                if (static_cast<int>(ce.log_turns.size()) != d.rank)
                    throw SchemaError(where + ": component log has the wrong dimension");
            }
            e.components.push_back(ce);
        }
        if (e.components.empty() || e.components[0].label != "1")
            throw SchemaError(where + ": component group must list the identity '1' first");
        e.compact_roots = g.contains("compact_roots") ? parse_root_set(g.at("compact_roots"), d, where)
                                                      : (e.compact ? d.all_roots : 0);
        for (size_t i = 0; i < d.roots.size(); ++i)
            if ((e.compact_roots >> i & 1) && !(e.compact_roots >> d.negative[i] & 1))
                throw SchemaError(where + ": compact roots are not symmetric");
        if (e.compact && e.compact_roots != d.all_roots) throw SchemaError(where + ": every root of a compact form is compact");
        if (g.contains("members"))
            for (const auto& m : g.at("members")) e.member_labels.push_back(detail::to_str(m, where));
        size_t ncos = e.member_cosets().size();
        if (e.member_labels.empty())
            for (size_t i = 0; i < ncos; ++i) e.member_labels.push_back("pi" + std::to_string(i));
        if (e.member_labels.size() != ncos)
            throw SchemaError(where + ": " + std::to_string(ncos) + " discrete series members expected");
        for (const auto& l : detail::need(g, "levis", where)) {
            LeviEntry m;
            m.label = detail::to_str(detail::need(l, "label", where), where);
            std::string lw = where + " levi " + m.label;
            m.cuspidal = detail::to_bool(detail::need(l, "cuspidal", lw), lw);
            m.m_roots = parse_root_set(detail::need(l, "m_roots", lw), d, lw);
            m.real_roots = parse_root_set(detail::need(l, "real_roots", lw), d, lw);
            m.y = l.contains("y") ? detail::to_qmat(l.at("y"), lw) : identity(d.rank);
            if (static_cast<int>(m.y.size()) != d.rank) throw SchemaError(lw + ": y has the wrong size");
            for (size_t i = 0; i < d.roots.size(); ++i)
                if (d.root_index(mat_vec(m.y, d.roots[i])) < 0)
                    throw SchemaError(lw + ": y does not preserve the root set");
            m.positive_chamber = l.contains("positive_chamber") ? detail::to_qvec(l.at("positive_chamber"), lw) : d.rho();
            for (size_t i = 0; i < d.roots.size(); ++i)
                if (d.pair(m.positive_chamber, d.roots[i]) == 0)
                    throw SchemaError(lw + ": positive_chamber is not regular");
            m.dim_a = detail::to_int(detail::need(l, "dim_a", lw), lw);
            m.weyl_order = detail::to_int(detail::need(l, "weyl_order", lw), lw);
            if (l.contains("invariance_words")) m.invariance_words = parse_words(l.at("invariance_words"), lw);
            for (const auto& w : m.invariance_words) weyl_index_of_word(d, w);
            if (l.contains("member_characters")) m.member_characters = detail::to_str(l.at("member_characters"), lw);
            if (l.contains("measure")) m.measure = detail::to_str(l.at("measure"), lw);
            for (size_t i = 0; i < d.roots.size(); ++i) {
                bool in_r = m.real_roots >> i & 1, in_m = m.m_roots >> i & 1;
                if (in_r && in_m) throw SchemaError(lw + ": a root cannot be both real and a root of M");
                if (in_r && !(m.real_roots >> d.negative[i] & 1)) throw SchemaError(lw + ": real roots not symmetric");
            }
            e.levis.push_back(m);
        }
        for (const auto& other : cat.groups)
            if (other.label == e.label) throw SchemaError("duplicate group '" + e.label + "'");
        cat.groups.push_back(std::move(e));
    }
    return cat;
}

GroupCatalog load_group_catalog(const std::string& path) { return load_group_catalog_text(read_file(path)); }

}  // namespace stf
