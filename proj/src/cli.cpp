#include "stf/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <random>
#include <sstream>

#include "stf/cbar.hpp"
#include "stf/characters.hpp"
#include "stf/endoscopy.hpp"
#include "stf/packets.hpp"
#include "stf/rootsys.hpp"
#include "stf/trace.hpp"

namespace stf {

namespace {

using ojson = nlohmann::ordered_json;

QVec parse_qvec(const std::string& s) {
    QVec v;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) v.push_back(parse_rational(item));
    return v;
}

std::vector<double> parse_dvec(const std::string& s) {
    std::vector<double> v;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InputError("'" + item + "' is not a number");
        }
    }
    return v;
}

std::string mask_str(const RootDatum& d, RootMask m) {
    std::string s = "{";
    for (int i : simple_roots_of(d, m)) s += (s.size() > 1 ? " " : "") + to_string(d.roots[i]);
    return s + "}";
}

std::string numeric_str(const Value& v) {
    std::ostringstream o;
    o.precision(12);
    auto z = v.numeric();
    o << z.real();
    if (z.imag() != 0.0) o << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return o.str();
}

class Printer {
public:
    Printer(std::ostream& out, bool structured) : out_(out), structured_(structured) {}
    bool structured() const { return structured_; }
    void record(const ojson& j) { out_ << j.dump() << "\n"; }
    void line(const std::string& s) { out_ << s << "\n"; }

    void report(const Report& r, bool emit_terms) {
        if (structured_) {
            ojson j;
            j["record"] = "report";
            j["quantity"] = r.quantity;
            j["subject"] = r.subject;
            j["total"] = r.total.str();
            if (r.integer) j["integer"] = *r.integer;
            j["exact"] = r.exact;
            j["tolerance"] = r.tolerance;
            record(j);
            if (emit_terms)
                for (const auto& t : r.terms) {
                    ojson e;
                    e["record"] = "term";
                    e["endo"] = t.endo;
                    e["levi"] = t.levi;
                    e["class"] = t.cls;
                    e["iota"] = to_string(t.iota);
                    e["sign"] = t.sign;
                    e["weyl_quotient"] = to_string(t.weyl_quotient);
                    e["coefficient"] = t.coefficient.str();
                    e["sphi"] = t.sphi.str();
                    e["orbital"] = to_string(t.orbital);
                    e["product"] = t.product.str();
                    record(e);
                }
            for (const auto& f : r.filtered) record(ojson{{"record", "filtered"}, {"class", f}});
            for (const auto& [file, hash] : r.fingerprints)
                record(ojson{{"record", "input"}, {"file", file}, {"fnv1a", hash}});
            return;
        }
        line(r.integer ? std::to_string(*r.integer) : r.total.str());
        if (!emit_terms) return;
        line("# " + r.quantity + " " + r.subject + " total " + r.total.str());
        line("# endo | levi | class | iota | sign | |W^M'|/|W^G'| | coefficient | SPhi | orbital | product");
        for (const auto& t : r.terms)
            line(t.endo + " | " + t.levi + " | " + t.cls + " | " + to_string(t.iota) + " | " + std::to_string(t.sign) +
                 " | " + to_string(t.weyl_quotient) + " | " + t.coefficient.str() + " | " + t.sphi.str() + " | " +
                 to_string(t.orbital) + " | " + t.product.str());
        for (const auto& f : r.filtered) line("# filtered: " + f);
        for (const auto& [file, hash] : r.fingerprints) line("# input " + file + " " + hash);
    }

    void check(const std::string& name, bool ok, const std::string& detail) {
        if (structured_) {
            record(ojson{{"record", "check"}, {"check", name}, {"status", ok ? "PASS" : "FAIL"}, {"detail", detail}});
        } else {
            line(std::string(ok ? "PASS " : "FAIL ") + name + (detail.empty() ? "" : ": " + detail));
        }
    }

private:
    std::ostream& out_;
    bool structured_;
};

std::string detect_schema(const std::string& text, const std::string& path) {
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw SchemaError(path + ": not a structured-text document");
    if (!doc.is_object() || !doc.contains("schema") || !doc.at("schema").is_string())
        throw SchemaError(path + ": document has no schema field");
    return doc.at("schema").get<std::string>();
}

void validate_file(const std::string& path, const Catalogs* shipped, Printer& pr) {
    std::string text = read_file(path);
    std::string schema = detect_schema(text, path);
    std::string detail;
    if (schema == "rootsys/1") {
        detail = std::to_string(load_group_catalog_text(text).groups.size()) + " groups";
    } else if (schema == "packets/1") {
        PacketCatalog c = load_packet_catalog_text(text, path);
        for (const auto& p : c.packets) verify_adjoint_relations(p);
        detail = std::to_string(c.packets.size()) + " packets";
    } else if (schema == "endo/1") {
        EndoCatalog c = load_endo_catalog_text(text, shipped ? &shipped->groups : nullptr,
                                               shipped ? &shipped->packets : nullptr, path);
        if (shipped) verify_endo_links(c, shipped->packets);
        detail = std::to_string(c.data.size()) + " endoscopic data, " + std::to_string(c.links.size()) + " links";
    } else if (schema == "arith/1") {
        ArithmeticData a = load_arith_data_text(text, path);
        size_t n = 0;
        for (const auto& b : a.blocks) n += b.classes.size();
        detail = std::to_string(n) + " stable classes, " + std::to_string(a.rejected.size()) + " filtered";
    } else {
        throw SchemaError(path + ": unknown schema '" + schema + "'");
    }
    pr.check("catalog " + path, true, detail);
}

int verify_all(const CliConfig& cfg, Printer& pr) {
    int failures = 0;
    auto step = [&](const std::string& name, const std::function<std::string()>& fn) {
        try {
            pr.check(name, true, fn());
        } catch (const std::exception& e) {
            ++failures;
            pr.check(name, false, e.what());
        }
    };
    Catalogs cat;
    step("catalogs", [&] {
        cat = load_catalogs(cfg.catalog_dir);
        cat.arith("SL2", 1);
        return std::to_string(cat.groups.groups.size()) + " groups, " + std::to_string(cat.packets.packets.size()) +
               " packets, " + std::to_string(cat.endo.data.size()) + " endoscopic data";
    });
    for (const char* type : {"A1", "A1xA1", "B2", "G2"}) {
        step(std::string("cbar ") + type, [&] {
            auto d = build_root_datum(type);
            CbarTable built = load_or_build_cbar_table(d, cfg.cache_dir);
            CbarTable solved = solve_cbar_by_axioms(d);
            if (built.values != solved.values) throw InternalAxiomConflict("recursion and solver disagree");
            AxiomReport r = verify_cbar_axioms(built);
            if (!r.ok) throw InternalAxiomConflict(r.first_failure);
            return std::to_string(built.values.size()) + " entries, unique";
        });
    }
    std::mt19937_64 rng(cfg.seed);
    step("characters", [&] {
        int n = 0;
        for (const char* label : {"SU2", "Spin5"}) {
            const GroupEntry& g = cat.groups.group(label);
            const RootDatum& d = *g.datum;
            QVec lambda = d.rho() + d.rho();
            HCParameter p = make_hc_parameter(g, lambda);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (int i = 0; i < 20; ++i) {
                TorusPoint x = make_point(QVec(d.rank, 0));
                for (int k = 0; k < d.rank; ++k) x.drift.push_back(u(rng));
                if (!is_regular(d, x)) continue;
                Value a = stable_ds_character(p, x);
                Value b = member_sum_phiM(p, "G", x);
                if (g.q % 2) b = -b;
                if (!a.close_to(b, cfg.tolerance)) throw RouteMismatch("stable and member characters differ");
                ++n;
            }
            TorusPoint e = make_point(QVec(d.rank, 0));
            Value lim = singular_character_limit(p, e);
            if (lim.exact() != Cyc(weyl_dimension(d, lambda))) throw RouteMismatch("limit at 1 is not the dimension");
        }
        return std::to_string(n) + " regular points";
    });
    step("weyl integration", [&] {
        HCParameter p = make_hc_parameter(cat.groups.group("SU2"), QVec{Q(3, 2)});
        auto r = weyl_integration_check(p, [](double t) { return 1.0 + std::cos(2 * t); });
        if (r.residual >= 1e-6) throw RouteMismatch("residual " + numeric_str(Value::numeric(r.residual)));
        return "residual " + numeric_str(Value::numeric(r.residual));
    });
    step("packets", [&] {
        long checks = 0;
        for (const auto& p : cat.packets.packets) {
            auto r = verify_adjoint_relations(p);
            checks += r.checks_21 + r.checks_22 + r.scaling_checks;
        }
        for (int i = 0; i < 200; ++i) {
            auto r = verify_adjoint_relations(random_packet(static_cast<int>(rng() % 5), rng));
            checks += r.checks_21 + r.checks_22 + r.scaling_checks;
        }
        return std::to_string(checks) + " exact identities";
    });
    step("endoscopy", [&] {
        int n = verify_endo_links(cat.endo, cat.packets);
        std::string canon = serialize_endo_catalog(cat.endo);
        if (serialize_endo_catalog(load_endo_catalog_text(canon)) != canon)
            throw SchemaError("catalog round trip is not byte-identical");
        return std::to_string(n) + " linked pairs";
    });
    step("trace SL2 level 1", [&] {
        ArithmeticData a = cat.arith("SL2", 1);
        TraceOptions opt{cfg.tolerance, cfg.jobs};
        std::string s;
        for (int k = 12; k <= 26; k += 2) {
            auto ps = packet_sum_crosscheck(cat, a, k, opt);
            lefschetz(cat, a, k, opt);
            s += (s.empty() ? "" : " ") + std::to_string(*ps.members[0].integer);
        }
        return "dim S_k for k = 12..26: " + s;
    });
    return failures ? 1 : 0;
}

int exit_code(const std::exception& e, std::ostream& err) {
    err << "error: " << e.what() << "\n";
    if (auto* se = dynamic_cast<const Error*>(&e)) return se->is_input_error() ? 2 : 1;
    return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    cfg.catalog_dir = default_catalog_dir();
    if (const char* c = std::getenv("STF_CACHE_DIR")) cfg.cache_dir = c;

    CLI::App app{"stable trace formula toolkit"};
    app.option_defaults()->always_capture_default();
    app.add_option("--catalog-dir", cfg.catalog_dir, "directory with groups, packets, endo and arith catalogs");
    app.add_option("--cache-dir", cfg.cache_dir, "C-bar table cache (env STF_CACHE_DIR)");
    app.add_option("--tolerance", cfg.tolerance, "comparison tolerance in (0, 1e-3]");
    app.add_option("--format", cfg.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    app.add_option("--jobs", cfg.jobs, "parallel term evaluation")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "seed for randomized suites");
    app.require_subcommand(1);

    auto* catalog = app.add_subcommand("catalog", "catalog tools");
    catalog->require_subcommand(1);
    auto* validate = catalog->add_subcommand("validate", "validate catalog documents");
    std::vector<std::string> paths;
    validate->add_option("paths", paths, "documents (default: the shipped catalogs)");

    auto* cbar_cmd = app.add_subcommand("cbar", "C-bar tables");
    cbar_cmd->require_subcommand(1);
    auto* table = cbar_cmd->add_subcommand("table", "build and verify a table");
    std::string type;
    bool as_json = false;
    table->add_option("--type", type, "Cartan type")->required();
    table->add_flag("--json", as_json, "print the cache document");

    auto* chr = app.add_subcommand("char", "characters");
    chr->require_subcommand(1);
    auto* eval = chr->add_subcommand("eval", "evaluate a character at a torus point");
    std::string group, lambda, turns = "", real, component = "1", levi, member;
    eval->add_option("--group", group)->required();
    eval->add_option("--lambda", lambda, "comma-separated rationals")->required();
    eval->add_option("--turns", turns, "comma-separated rationals (default 0)");
    eval->add_option("--real", real, "comma-separated reals");
    eval->add_option("--component", component);
    eval->add_option("--levi", levi, "Phi_M through C-bar for this Levi");
    eval->add_option("--member", member, "single packet member (with --levi)");

    auto* packet = app.add_subcommand("packet", "packets");
    packet->require_subcommand(1);
    auto* pcheck = packet->add_subcommand("check", "adjoint relations");
    std::string entry;
    pcheck->add_option("--entry", entry);

    std::string mgroup = "SL2", mmember = "D+";
    int weight = 0, level = 1;
    bool emit_terms = false;
    auto* mult = app.add_subcommand("multiplicity", "m_disc of a holomorphic discrete series");
    mult->add_option("--group", mgroup)->required();
    mult->add_option("--weight", weight)->required();
    mult->add_option("--level", level)->required();
    mult->add_option("--member", mmember);
    mult->add_flag("--emit-terms", emit_terms);
    auto* lef = app.add_subcommand("lefschetz", "L2-Lefschetz number of the unit Hecke operator");
    lef->add_option("--group", mgroup)->required();
    lef->add_option("--weight", weight)->required();
    lef->add_option("--level", level)->required();
    lef->add_flag("--emit-terms", emit_terms);

    auto* verify = app.add_subcommand("verify", "verification suites");
    verify->require_subcommand(1);
    auto* all = verify->add_subcommand("all", "every suite on the shipped catalogs");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }
    if (!(cfg.tolerance > 0 && cfg.tolerance <= 1e-3)) {
        err << "error: --tolerance must lie in (0, 1e-3]\n";
        return 2;
    }
    Printer pr(out, cfg.format == "structured");

    try {
        if (validate->parsed()) {
            if (paths.empty()) {
                Catalogs c = load_catalogs(cfg.catalog_dir);
                for (const auto& f : {"groups.json", "packets.json", "endo.json"})
                    validate_file((std::filesystem::path(cfg.catalog_dir) / f).string(), &c, pr);
                for (const auto& e : std::filesystem::directory_iterator(cfg.catalog_dir)) {
                    std::string name = e.path().filename().string();
                    if (name.rfind("arith_", 0) == 0) validate_file(e.path().string(), &c, pr);
                }
                return 0;
            }
            std::unique_ptr<Catalogs> shipped;
            try {
                shipped = std::make_unique<Catalogs>(load_catalogs(cfg.catalog_dir));
            } catch (const Error&) {
            }
            for (const auto& p : paths) validate_file(p, shipped.get(), pr);
            return 0;
        }
        if (table->parsed()) {
            auto d = build_root_datum(type);
            CbarTable t = load_or_build_cbar_table(d, cfg.cache_dir);
            if (as_json) {
                out << cbar_table_json(t) << "\n";
                return 0;
            }
            for (const auto& [k, v] : t.values) {
                if (k.system != d->all_roots) continue;
                if (pr.structured())
                    pr.record(ojson{{"record", "cbar"}, {"type", d->cartan_type}, {"q_plus", mask_str(*d, k.q_plus)},
                                    {"r_plus", mask_str(*d, k.r_plus)}, {"value", v}});
                else
                    pr.line("Q+ " + mask_str(*d, k.q_plus) + "  R+ " + mask_str(*d, k.r_plus) + "  " +
                            std::to_string(v));
            }
            const AxiomReport& r = t.report;
            pr.check("axioms " + d->cartan_type, r.ok,
                     std::to_string(r.invariance_checks) + " invariance, " + std::to_string(r.support_checks) +
                         " support, " + std::to_string(r.reflection_checks) + " reflection, " +
                         std::to_string(r.empty_checks) + " empty");
            return r.ok ? 0 : 1;
        }
        if (eval->parsed()) {
            GroupCatalog gc = load_group_catalog((std::filesystem::path(cfg.catalog_dir) / "groups.json").string());
            const GroupEntry& g = gc.group(group);
            const RootDatum& d = *g.datum;
            HCParameter p = make_hc_parameter(g, parse_qvec(lambda));
            TorusPoint x = make_point(turns.empty() ? QVec(d.rank, 0) : parse_qvec(turns), component);
            if (!real.empty()) x.real = parse_dvec(real);
            if (static_cast<int>(x.turns.size()) != d.rank || (!x.real.empty() && static_cast<int>(x.real.size()) != d.rank))
                throw InputError("torus point must have " + std::to_string(d.rank) + " coordinates");
            g.component(component);
            Value v;
            std::string what;
            if (levi.empty()) {
                what = "stable";
                v = is_regular(d, x) ? stable_ds_character(p, x) : singular_character_limit(p, x);
            } else if (!member.empty()) {
                int idx = -1;
                for (size_t i = 0; i < g.member_labels.size(); ++i)
                    if (g.member_labels[i] == member) idx = static_cast<int>(i);
                if (idx < 0) throw InputError(group + " has no packet member " + member);
                what = "member " + member;
                v = member_phiM(p, levi, idx, x);
            } else {
                what = "Phi_" + levi;
                v = is_regular(d, x) ? averaged_character_phiM(p, levi, x) : singular_character_limit(p, x, levi);
            }
            if (pr.structured())
                pr.record(ojson{{"record", "character"}, {"group", group}, {"kind", what}, {"exact", v.is_exact()},
                                {"value", v.str()}, {"numeric", numeric_str(v)}});
            else
                pr.line(what + " " + v.str() + (v.is_exact() ? "  (" + numeric_str(v) + ")" : ""));
            return 0;
        }
        if (pcheck->parsed()) {
            PacketCatalog pc = load_packet_catalog((std::filesystem::path(cfg.catalog_dir) / "packets.json").string());
            std::vector<const PacketDatum*> list;
            if (entry.empty())
                for (const auto& p : pc.packets) list.push_back(&p);
            else
                list.push_back(&pc.packet(entry));
            int failures = 0;
            for (const auto* p : list) {
                try {
                    auto r = verify_adjoint_relations(*p);
                    pr.check("packet " + p->label, true,
                             "|S| = " + std::to_string(p->s_order()) + ", |E| = " + std::to_string(p->e_order()) +
                                 ", |R| = " + std::to_string(p->r_order()) + ", " +
                                 std::to_string(r.checks_21 + r.checks_22 + r.scaling_checks) + " identities");
                } catch (const AdjointRelationFailure& e) {
                    ++failures;
                    pr.check("packet " + p->label, false, e.what());
                }
            }
            return failures ? 1 : 0;
        }
        if (mult->parsed() || lef->parsed()) {
            Catalogs c = load_catalogs(cfg.catalog_dir);
            ArithmeticData a = c.arith(mgroup, level);
            TraceOptions opt{cfg.tolerance, cfg.jobs};
            Report r = mult->parsed() ? multiplicity(c, a, weight, mmember, opt) : lefschetz(c, a, weight, opt);
            pr.report(r, emit_terms);
            return 0;
        }
        if (all->parsed()) return verify_all(cfg, pr);
    } catch (const std::exception& e) {
        return exit_code(e, err);
    }
    return 2;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace stf
