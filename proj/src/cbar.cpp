#include "stf/cbar.hpp"

#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <algorithm>
#include <numeric>
#include <set>

#include "json_util.hpp"

namespace stf {

using detail::json;

namespace {

constexpr const char* kCacheSchema = "cbar/1";

bool has(RootMask m, int i) { return m >> i & 1; }

// dual basis of the simple roots inside their span: B(out_j, simple_i) = delta_ij
std::vector<QVec> chamber_rays(const RootDatum& d, const std::vector<int>& simple) {
    size_t k = simple.size();
    QMat gram(k, QVec(k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) gram[i][j] = d.pair(d.roots[simple[i]], d.roots[simple[j]]);
    QMat inv = inverse(gram);
    std::vector<QVec> rays;
    for (size_t j = 0; j < k; ++j) {
        QVec v(d.rank, 0);
        for (size_t l = 0; l < k; ++l) v = v + inv[j][l] * d.roots[simple[l]];
        rays.push_back(v);
    }
    return rays;
}

}  // namespace

RootMask apply_perm(const std::vector<int>& perm, RootMask m) {
    RootMask r = 0;
    for (size_t i = 0; i < perm.size(); ++i)
        if (has(m, static_cast<int>(i))) r |= RootMask(1) << perm[i];
    return r;
}

RootMask orthogonal_subsystem(const RootDatum& d, RootMask system, int root) {
    RootMask r = 0;
    for (size_t i = 0; i < d.roots.size(); ++i)
        if (has(system, static_cast<int>(i)) && d.pair(d.roots[i], d.roots[root]) == 0) r |= RootMask(1) << i;
    return r;
}

std::vector<int> simple_roots_of(const RootDatum& d, RootMask positive) {
    std::vector<int> out;
    for (size_t i = 0; i < d.roots.size(); ++i) {
        if (!has(positive, static_cast<int>(i))) continue;
        bool decomposable = false;
        for (size_t j = 0; j < d.roots.size() && !decomposable; ++j) {
            if (j == i || !has(positive, static_cast<int>(j))) continue;
            int k = d.root_index(d.roots[i] - d.roots[j]);
            if (k >= 0 && has(positive, k)) decomposable = true;
        }
        if (!decomposable) out.push_back(static_cast<int>(i));
    }
    return out;
}

RootMask wall_roots(const RootDatum& d, RootMask q_plus, RootMask r_plus) {
    RootMask m = 0;
    for (int i : simple_roots_of(d, q_plus)) m |= RootMask(1) << i | RootMask(1) << d.negative[i];
    for (int i : simple_roots_of(d, r_plus)) m |= RootMask(1) << i | RootMask(1) << d.negative[i];
    return m;
}

bool cbar_support_condition(const RootDatum& d, RootMask system, RootMask q_plus, RootMask r_plus) {
    if (system == 0) return true;
    auto nu = chamber_rays(d, simple_roots_of(d, q_plus & system));
    auto x = chamber_rays(d, simple_roots_of(d, r_plus & system));
    bool strict = false;
    for (const auto& a : nu)
        for (const auto& b : x) {
            Q p = d.pair(a, b);
            if (p > 0) return false;
            if (p < 0) strict = true;
        }
    return strict;
}

std::vector<std::vector<int>> subsystem_weyl_perms(const RootDatum& d, RootMask system) {
    std::vector<int> id(d.roots.size());
    std::iota(id.begin(), id.end(), 0);
    std::vector<std::vector<int>> gens;
    for (size_t i = 0; i < d.roots.size(); ++i)
        if (has(system, static_cast<int>(i))) gens.push_back(d.reflection_perm(static_cast<int>(i)));
    std::set<std::vector<int>> seen{id};
    std::vector<std::vector<int>> out{id};
    for (size_t h = 0; h < out.size(); ++h)
        for (const auto& g : gens) {
            std::vector<int> c(id.size());
            for (size_t i = 0; i < id.size(); ++i) c[i] = g[out[h][i]];
            if (seen.insert(c).second) out.push_back(c);
        }
    return out;
}

std::vector<RootMask> subsystem_positive_systems(const RootDatum& d, RootMask system) {
    std::set<RootMask> s;
    for (const auto& p : subsystem_weyl_perms(d, system)) s.insert(apply_perm(p, d.base_positive & system));
    return {s.begin(), s.end()};
}

std::vector<RootMask> orthogonal_closure(const RootDatum& d) {
    std::set<RootMask> seen{d.all_roots};
    std::deque<RootMask> work{d.all_roots};
    while (!work.empty()) {
        RootMask s = work.front();
        work.pop_front();
        for (size_t i = 0; i < d.roots.size(); ++i) {
            if (!has(s, static_cast<int>(i))) continue;
            RootMask t = orthogonal_subsystem(d, s, static_cast<int>(i));
            if (seen.insert(t).second) work.push_back(t);
        }
    }
    return {seen.begin(), seen.end()};
}

CbarEngine::CbarEngine(RootDatumPtr datum, bool require_minus_one) : d_(std::move(datum)) {
    if (require_minus_one && !contains_minus_one(*d_)) throw MinusOneRequired("W(" + d_->cartan_type + ") does not contain -1");
}

long CbarEngine::value(RootMask system, RootMask q_plus, RootMask r_plus) {
    q_plus &= system;
    r_plus &= system;
    if (system == 0) return 1;
    CbarKey key{system, q_plus, r_plus};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const RootDatum& d = *d_;
    long v = 0;
    if (cbar_support_condition(d, system, q_plus, r_plus)) {
        int beta = -1;
        for (int s : simple_roots_of(d, q_plus))
            if (!has(r_plus, s)) {
                beta = s;
                break;
            }
        if (beta < 0) throw InternalAxiomConflict("support holds but Q+ = R+");
        RootMask sub = orthogonal_subsystem(d, system, beta);
        RootMask flipped = apply_perm(d.reflection_perm(beta), q_plus);
        v = 2 * value(sub, q_plus & sub, r_plus & sub) - value(system, flipped, r_plus);
    }
    memo_[key] = v;
    return v;
}

bool subsystem_contains_minus_one(const RootDatum& d, RootMask system) {
    for (const auto& w : subsystem_weyl_perms(d, system)) {
        bool neg = true;
        for (size_t i = 0; i < d.roots.size() && neg; ++i)
            if (has(system, static_cast<int>(i)) && w[i] != d.negative[i]) neg = false;
        if (neg) return true;
    }
    return false;
}

long cbar_value(const RootDatumPtr& d, RootMask system, RootMask q_plus, RootMask r_plus) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<CbarEngine>> engines;
    static std::set<std::pair<std::string, RootMask>> checked;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(d->cartan_type, system);
    if (!checked.count(key)) {
        if (!subsystem_contains_minus_one(*d, system))
            throw MinusOneRequired("the real-root system of " + d->cartan_type + " lacks -1 in its Weyl group");
        checked.insert(key);
    }
    auto& e = engines[d->cartan_type];
    if (!e) e = std::make_unique<CbarEngine>(d, false);
    return e->value(system, q_plus, r_plus);
}

long CbarTable::at(RootMask q_plus, RootMask r_plus) const {
    auto it = values.find({datum->all_roots, q_plus, r_plus});
    if (it == values.end()) throw DomainMismatch("not a pair of positive systems of " + cartan_type);
    return it->second;
}

long cbar(const CbarTable& t, RootMask q_plus, RootMask r_plus) { return t.at(q_plus, r_plus); }

AxiomReport verify_cbar_axioms(const CbarTable& t) {
    const RootDatum& d = *t.datum;
    AxiomReport rep;
    auto fail = [&](const std::string& m) {
        if (rep.ok) rep.first_failure = m;
        rep.ok = false;
    };
    auto get = [&](RootMask s, RootMask q, RootMask r) -> long {
        auto it = t.values.find({s, q & s, r & s});
        if (it == t.values.end()) {
            fail("missing entry");
            return 0;
        }
        return it->second;
    };
    for (RootMask s : orthogonal_closure(d)) {
        auto ps = subsystem_positive_systems(d, s);
        auto ws = subsystem_weyl_perms(d, s);
        for (RootMask q : ps)
            for (RootMask r : ps) {
                long v = get(s, q, r);
                if (v != 1 && v % 2 != 0) rep.values_even_or_one = false;
                if (s == 0) {
                    ++rep.empty_checks;
                    if (v != 1) fail("axiom 4: empty system value is not 1");
                    continue;
                }
                for (const auto& w : ws) {
                    ++rep.invariance_checks;
                    if (get(s, apply_perm(w, q), apply_perm(w, r)) != v) fail("axiom 1: W-invariance");
                }
                ++rep.support_checks;
                if (!cbar_support_condition(d, s, q, r) && v != 0) fail("axiom 2: nonzero outside the support");
                RootMask walls = wall_roots(d, q, r);
                for (size_t a = 0; a < d.roots.size(); ++a) {
                    if (!has(s, static_cast<int>(a))) continue;
                    if (!has(walls, static_cast<int>(a))) {
                        ++rep.non_wall_reflections;
                        continue;
                    }
                    ++rep.reflection_checks;
                    RootMask sub = orthogonal_subsystem(d, s, static_cast<int>(a));
                    RootMask sq = apply_perm(d.reflection_perm(static_cast<int>(a)), q);
                    if (v + get(s, sq, r) != 2 * get(sub, q, r)) fail("axiom 3: reflection relation");
                }
            }
    }
    return rep;
}

CbarTable build_cbar_table(RootDatumPtr dp) {
    CbarEngine eng(dp);
    const RootDatum& d = *dp;
    CbarTable t;
    t.cartan_type = d.cartan_type;
    t.datum = dp;
    for (RootMask s : orthogonal_closure(d)) {
        auto ps = subsystem_positive_systems(d, s);
        for (RootMask q : ps)
            for (RootMask r : ps) t.values[{s, q, r}] = eng.value(s, q, r);
    }
    t.report = verify_cbar_axioms(t);
    if (!t.report.ok) throw InternalAxiomConflict(t.cartan_type + ": " + t.report.first_failure);
    return t;
}

CbarTable build_cbar_table(const RootDatum& d) { return build_cbar_table(build_root_datum(d.cartan_type)); }

namespace {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

CbarTable solve_cbar_by_axioms(RootDatumPtr dp) {
    const RootDatum& d = *dp;
    if (!contains_minus_one(d)) throw MinusOneRequired("W(" + d.cartan_type + ") does not contain -1");

    std::vector<CbarKey> keys;
    std::map<CbarKey, int> index;
    auto closure = orthogonal_closure(d);
    for (RootMask s : closure)
        for (RootMask q : subsystem_positive_systems(d, s))
            for (RootMask r : subsystem_positive_systems(d, s)) {
                index[{s, q, r}] = static_cast<int>(keys.size());
                keys.push_back({s, q, r});
            }
    auto idx = [&](RootMask s, RootMask q, RootMask r) { return index.at({s, q & s, r & s}); };

    // axiom (1): equalities collapse unknowns into W(S)-orbits
    UnionFind uf(keys.size());
    for (RootMask s : closure) {
        auto ws = subsystem_weyl_perms(d, s);
        for (RootMask q : subsystem_positive_systems(d, s))
            for (RootMask r : subsystem_positive_systems(d, s))
                for (const auto& w : ws) uf.unite(idx(s, q, r), idx(s, apply_perm(w, q), apply_perm(w, r)));
    }

    // equations: sparse rows over orbit representatives, constant in slot -1
    using Row = std::map<int, Q>;
    std::vector<Row> rows;
    auto add = [](Row& row, int k, const Q& c) {
        Q& x = row[k];
        x += c;
        if (x == 0) row.erase(k);
    };
    for (size_t k = 0; k < keys.size(); ++k) {
        const auto& key = keys[k];
        int v = uf.find(static_cast<int>(k));
        if (key.system == 0) {  // axiom (4)
            Row row;
            add(row, v, 1);
            add(row, -1, 1);
            rows.push_back(row);
            continue;
        }
        if (!cbar_support_condition(d, key.system, key.q_plus, key.r_plus)) {  // axiom (2)
            Row row;
            add(row, v, 1);
            rows.push_back(row);
        }
        RootMask walls = wall_roots(d, key.q_plus, key.r_plus);
        for (size_t a = 0; a < d.roots.size(); ++a) {  // axiom (3)
            if (!has(walls, static_cast<int>(a))) continue;
            RootMask sub = orthogonal_subsystem(d, key.system, static_cast<int>(a));
            RootMask sq = apply_perm(d.reflection_perm(static_cast<int>(a)), key.q_plus);
            Row row;
            add(row, v, 1);
            add(row, uf.find(idx(key.system, sq, key.r_plus)), 1);
            add(row, uf.find(idx(sub, key.q_plus, key.r_plus)), -2);
            if (!row.empty()) rows.push_back(row);
        }
    }

    std::set<int> unknowns;
    for (size_t k = 0; k < keys.size(); ++k) unknowns.insert(uf.find(static_cast<int>(k)));

    // exact elimination; pivots keyed by leading unknown
    std::map<int, Row> pivots;
    for (Row row : rows) {
        for (;;) {
            int lead = -2;
            for (const auto& [k, c] : row)
                if (k >= 0) {
                    lead = k;
                    break;
                }
            if (lead == -2) {
                if (row.count(-1)) throw UniquenessFailure(d.cartan_type + ": the axiom system is inconsistent");
                break;
            }
            auto pit = pivots.find(lead);
            if (pit == pivots.end()) {
                Q inv = 1 / row.at(lead);
                for (auto& [k, c] : row) c *= inv;
                pivots[lead] = row;
                break;
            }
            Q f = row.at(lead);
            for (const auto& [k, c] : pit->second) add(row, k, -f * c);
        }
    }
    if (pivots.size() != unknowns.size())
        throw UniquenessFailure(d.cartan_type + ": " + std::to_string(unknowns.size() - pivots.size()) +
                                " free parameters remain");

    // back substitution from the highest leading index down
    std::map<int, Q> sol;
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        Q val = 0;
        for (const auto& [k, c] : it->second) {
            if (k == it->first) continue;
            if (k == -1) val += c;
            else val -= c * sol.at(k);
        }
        sol[it->first] = val;
    }

    CbarTable t;
    t.cartan_type = d.cartan_type;
    t.datum = dp;
    for (size_t k = 0; k < keys.size(); ++k) {
        const Q& v = sol.at(uf.find(static_cast<int>(k)));
        if (v.get_den() != 1) throw UniquenessFailure(d.cartan_type + ": non-integral solution");
        t.values[keys[k]] = v.get_num().get_si();
    }
    t.report = verify_cbar_axioms(t);
    return t;
}

std::string default_cache_dir() {
    const char* e = std::getenv("STF_CACHE_DIR");
    return e ? e : "";
}

std::string cbar_table_json(const CbarTable& t) {
    json doc;
    doc["schema"] = kCacheSchema;
    doc["cartan_type"] = t.cartan_type;
    json entries = json::array();
    for (const auto& [k, v] : t.values) entries.push_back({k.system, k.q_plus, k.r_plus, v});
    doc["entries"] = entries;
    return doc.dump();
}

CbarTable load_or_build_cbar_table(RootDatumPtr d, const std::string& cache_dir) {
    namespace fs = std::filesystem;
    if (cache_dir.empty()) return build_cbar_table(d);
    fs::path file = fs::path(cache_dir) / (std::string(kCacheSchema).replace(4, 1, "-") + "-" + d->cartan_type + ".json");
    std::error_code ec;
    if (fs::exists(file, ec)) {
        try {
            json doc = json::parse(read_file(file.string()));
            if (doc.at("schema") == kCacheSchema && doc.at("cartan_type") == d->cartan_type) {
                CbarTable t;
                t.cartan_type = d->cartan_type;
                t.datum = d;
                for (const auto& e : doc.at("entries"))
                    t.values[{e[0].get<RootMask>(), e[1].get<RootMask>(), e[2].get<RootMask>()}] = e[3].get<long>();
                t.report = verify_cbar_axioms(t);
                if (t.report.ok) return t;
            }
        } catch (const std::exception&) {
            // stale or damaged cache: rebuild below
        }
    }
    CbarTable t = build_cbar_table(d);
    fs::create_directories(cache_dir, ec);
    std::ofstream out(file);
    if (out) out << cbar_table_json(t) << "\n";
    return t;
}

}  // namespace stf
