#include "stphase/cli.hpp"

#include "stphase/dsl.hpp"
#include "stphase/errors.hpp"
#include "stphase/oracle.hpp"
#include "stphase/rigidity.hpp"
#include "stphase/structure.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace stphase {

namespace {

struct Options {
    std::optional<long> precision;
    long field_order = 1;
    bool json = false;
};

std::string read_source(const std::string& path, std::istream& in) {
    std::stringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream f(path);
    if (!f) {
        throw DomainError("cannot open " + path);
    }
    buf << f.rdbuf();
    return buf.str();
}

// Parse errors are re-thrown with the file name in front of the location.
template <class F>
auto located(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError& e) {
        const std::string file = path == "-" ? "<stdin>" : path;
        throw ParseError(e.message(), e.line(), e.column(), e.source().empty() ? file : file + ": " + e.source());
    }
}

ParsedDocument read_document(const std::string& path, std::istream& in) {
    const std::string text = read_source(path, in);
    return located(path, [&] { return parse_input(text); });
}

std::vector<NamedConnection> read_all(const std::vector<std::string>& paths, std::istream& in) {
    std::vector<NamedConnection> out;
    for (const auto& p : paths) {
        ParsedDocument doc = read_document(p, in);
        if (doc.statements.empty()) {
            throw DomainError("no connection in " + p);
        }
        for (auto& st : doc.statements) {
            out.push_back(std::move(st));
        }
    }
    return out;
}

Settings settings(const Options& o) {
    Settings s;
    s.precision = o.precision;
    return s;
}

Sign parse_sign(const std::string& s) {
    return s == "plus" ? Sign::plus : Sign::minus;
}

nlohmann::json provenance_json(const Provenance& log) {
    return nlohmann::json(log);
}

// Unary operations map over every statement; bare input gives bare output.
void emit_each(const std::vector<NamedConnection>& items, const Options& o, std::ostream& out,
               const std::function<nlohmann::json(const FormalConnection&, std::string&)>& f) {
    const bool bare = items.size() == 1 && items.front().name.empty();
    nlohmann::json all = nlohmann::json::object();
    for (const auto& it : items) {
        std::string text;
        nlohmann::json j = f(it.value, text);
        if (o.json) {
            if (bare) {
                out << j.dump(2) << "\n";
            } else {
                all[it.name] = std::move(j);
            }
        } else if (bare || it.name.empty()) {
            out << text << "\n";
        } else {
            out << it.name << " = " << text << ";\n";
        }
    }
    if (o.json && !bare) {
        out << all.dump(2) << "\n";
    }
}

std::pair<FormalConnection, FormalConnection> two_inputs(const std::vector<std::string>& paths, std::istream& in) {
    const auto items = read_all(paths, in);
    if (items.size() != 2) {
        throw DomainError("expected two connections, found " + std::to_string(items.size()));
    }
    return {items[0].value, items[1].value};
}

std::string invariants_table(const FormalConnection& m) {
    std::ostringstream out;
    out << "summand\tp\tq\tr\tslope\tirr\trank\n";
    for (const auto& el : m.summands) {
        const Invariants inv = el.invariants();
        out << el.to_string() << "\t" << el.p() << "\t" << el.q() << "\t" << el.r() << "\t"
            << rational_string(inv.slope) << "\t" << inv.irregularity << "\t" << inv.rank << "\n";
    }
    out << "total\t\t\t\t\t" << m.irregularity() << "\t" << m.rank();
    return out.str();
}

ElementaryConnection transform(const ElementaryConnection& el, const std::string& kind, Sign sign,
                               const std::optional<FieldElement>& s_point, const Settings& s) {
    if (kind == "0inf") {
        return fourier_0_inf(el, sign, s);
    }
    if (kind == "inf0") {
        return fourier_inf_0(el, sign, s);
    }
    if (kind == "infinf") {
        return fourier_inf_inf(el, sign, s);
    }
    return fourier_s_inf(el, *s_point, sign, s);
}

std::string report_table(const RigidityReport& r, IndexFormula f) {
    std::ostringstream out;
    out << "formula\t" << (f == IndexFormula::as_printed ? "as_printed" : "corrected") << "\n";
    out << "rank\t" << r.rank << "\n";
    out << "euler_characteristic\t" << r.euler_characteristic << "\n";
    out << "point\trank\tirr_end\tcentralizer\n";
    for (const auto& p : r.points) {
        out << p.label << "\t" << p.rank << "\t" << p.irregularity_end << "\t" << p.centralizer_term << "\n";
    }
    out << "index\t" << r.index;
    return out.str();
}

nlohmann::json report_json(const RigidityReport& r, IndexFormula f) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : r.points) {
        pts.push_back({{"point", p.label},
                       {"rank", p.rank},
                       {"irr_end", p.irregularity_end},
                       {"centralizer", p.centralizer_term}});
    }
    return {{"formula", f == IndexFormula::as_printed ? "as_printed" : "corrected"},
            {"index", r.index},
            {"rank", r.rank},
            {"euler_characteristic", r.euler_characteristic},
            {"points", pts}};
}

nlohmann::json oracle_json(const OracleReport& r) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : r.stages) {
        stages.push_back({{"stage", s.name}, {"expected", s.expected}, {"actual", s.actual}, {"ok", s.ok}});
    }
    return {{"a", r.a.to_string()}, {"q", r.q}, {"passed", r.passed()}, {"stages", stages}};
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact local Fourier-Laplace transforms of formal connections", "stphase"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");
    Options o;
    long precision = 0;
    auto* prec_opt = app.add_option("--precision", precision, "Known terms past the valuation for series expansions")
                         ->check(CLI::PositiveNumber);
    app.add_option("--field-order", o.field_order, "Initial cyclotomic order hint")->check(CLI::PositiveNumber);
    app.add_flag("--json", o.json, "Machine-readable output");

    std::function<int()> action;

    // fourier
    auto* fourier = app.add_subcommand("fourier", "Local Fourier-Laplace transform of each summand");
    std::string kind = "0inf";
    std::string sign_text = "minus";
    std::string s_text;
    bool canonical = false;
    std::vector<std::string> f_inputs{"-"};
    fourier->add_option("--kind", kind, "Transform kind")->check(CLI::IsMember({"0inf", "inf0", "sinf", "infinf"}));
    fourier->add_option("--sign", sign_text, "Kernel sign")->check(CLI::IsMember({"plus", "minus"}));
    fourier->add_option("--s", s_text, "Finite point s for --kind sinf");
    fourier->add_flag("--canonical", canonical, "Print the canonical representative");
    fourier->add_flag("--json", o.json, "Machine-readable output");
    fourier->add_option("input", f_inputs, "Input files ('-' for stdin)");
    fourier->callback([&] {
        action = [&] {
            const Settings s = settings(o);
            std::optional<FieldElement> point;
            if (kind == "sinf") {
                if (s_text.empty()) {
                    throw DomainError("--kind sinf needs --s <scalar>");
                }
                point = located("--s", [&] { return parse_scalar(s_text); });
            } else if (!s_text.empty()) {
                throw DomainError("--s only applies to --kind sinf");
            }
            const Sign sign = parse_sign(sign_text);
            emit_each(read_all(f_inputs, in), o, out, [&](const FormalConnection& m, std::string& text) {
                FormalConnection result;
                for (const auto& el : m.summands) {
                    result = result + transform(el, kind, sign, point, s);
                }
                Provenance log;
                if (canonical) {
                    result = canonicalize(result, s, &log);
                }
                text = result.to_string();
                nlohmann::json j = connection_json(result);
                j["kind"] = kind;
                j["sign"] = sign_name(sign);
                j["canonical"] = canonical;
                j["provenance"] = provenance_json(log);
                return j;
            });
            return kExitOk;
        };
    });

    auto unary = [&](const char* name, const char* help,
                     std::function<FormalConnection(const FormalConnection&, const Settings&, Provenance&)> f) {
        auto* cmd = app.add_subcommand(name, help);
        auto inputs = std::make_shared<std::vector<std::string>>(std::vector<std::string>{"-"});
        cmd->add_flag("--json", o.json, "Machine-readable output");
        cmd->add_option("input", *inputs, "Input files ('-' for stdin)");
        cmd->callback([&, inputs, f] {
            action = [&, inputs, f] {
                const Settings s = settings(o);
                emit_each(read_all(*inputs, in), o, out, [&](const FormalConnection& m, std::string& text) {
                    Provenance log;
                    const FormalConnection r = f(m, s, log);
                    text = r.to_string();
                    nlohmann::json j = connection_json(r);
                    j["provenance"] = provenance_json(log);
                    return j;
                });
                return kExitOk;
            };
        });
    };
    unary("dual", "Dual connection", [](const FormalConnection& m, const Settings& s, Provenance& log) {
        return canonicalize(dual(m), s, &log);
    });
    unary("det", "Determinant", [](const FormalConnection& m, const Settings& s, Provenance& log) {
        return canonicalize(FormalConnection(determinant(m, s)), s, &log);
    });
    unary("canon", "Canonical form", [](const FormalConnection& m, const Settings& s, Provenance& log) {
        return canonicalize(m, s, &log);
    });

    auto binary = [&](const char* name, const char* help,
                      std::function<FormalConnection(const FormalConnection&, const FormalConnection&, const Settings&)> f) {
        auto* cmd = app.add_subcommand(name, help);
        auto inputs = std::make_shared<std::vector<std::string>>();
        cmd->add_flag("--json", o.json, "Machine-readable output");
        cmd->add_option("inputs", *inputs, "One file with two statements, or two files ('-' for stdin)")
            ->required()
            ->expected(1, 2);
        cmd->callback([&, inputs, f] {
            action = [&, inputs, f] {
                const auto [a, b] = two_inputs(*inputs, in);
                const FormalConnection r = f(a, b, settings(o));
                out << (o.json ? connection_json(r).dump(2) : r.to_string()) << "\n";
                return kExitOk;
            };
        });
    };
    binary("tensor", "Tensor product", [](const FormalConnection& a, const FormalConnection& b, const Settings& s) {
        return tensor(a, b, s);
    });
    binary("hom", "Internal Hom(a, b)", [](const FormalConnection& a, const FormalConnection& b, const Settings& s) {
        return hom(a, b, s);
    });

    // invariants
    auto* inv = app.add_subcommand("invariants", "Slope, irregularity and rank of each summand");
    std::vector<std::string> inv_inputs{"-"};
    inv->add_flag("--json", o.json, "Machine-readable output");
    inv->add_option("input", inv_inputs, "Input files ('-' for stdin)");
    inv->callback([&] {
        action = [&] {
            for (const auto& it : read_all(inv_inputs, in)) {
                if (o.json) {
                    nlohmann::json j = connection_json(it.value);
                    if (!it.name.empty()) {
                        j["name"] = it.name;
                    }
                    out << j.dump(2) << "\n";
                } else {
                    if (!it.name.empty()) {
                        out << it.name << ":\n";
                    }
                    out << invariants_table(it.value) << "\n";
                }
            }
            return kExitOk;
        };
    });

    // iso
    auto* iso = app.add_subcommand("iso", "Isomorphism test with witness");
    std::vector<std::string> iso_inputs;
    iso->add_flag("--json", o.json, "Machine-readable output");
    iso->add_option("inputs", iso_inputs, "One file with two statements, or two files")->required()->expected(1, 2);
    iso->callback([&] {
        action = [&] {
            const Settings s = settings(o);
            const auto [a, b] = two_inputs(iso_inputs, in);
            const bool yes = is_isomorphic(a, b, s);
            nlohmann::json j{{"isomorphic", yes}};
            std::string witness;
            if (yes && a.summands.size() == 1 && b.summands.size() == 1) {
                const IsoWitness w = is_isomorphic_elementary(a.summands[0], b.summands[0], s);
                if (w.zeta) {
                    witness = "rotation zeta = " + w.zeta->to_string();
                    j["zeta"] = w.zeta->to_string();
                }
            }
            if (yes) {
                const std::string canon = canonicalize(a, s).to_string();
                j["canonical"] = canon;
                if (witness.empty()) {
                    witness = "common canonical form " + canon;
                }
            }
            if (o.json) {
                out << j.dump(2) << "\n";
            } else {
                out << (yes ? "isomorphic" : "not isomorphic") << (witness.empty() ? "" : ": " + witness) << "\n";
            }
            return kExitOk;
        };
    });

    // rigidity
    auto* rig = app.add_subcommand("rigidity", "Index of rigidity from local data (JSON)");
    std::string rig_input = "-";
    std::string formula_text = "as_printed";
    std::optional<long> genus;
    rig->add_option("--formula", formula_text, "Index formula")->check(CLI::IsMember({"as_printed", "corrected"}));
    rig->add_option("--genus", genus, "Override the genus given in the document")->check(CLI::NonNegativeNumber);
    rig->add_flag("--json", o.json, "Machine-readable output");
    rig->add_option("input", rig_input, "JSON document ('-' for stdin)");
    rig->callback([&] {
        action = [&] {
            const Settings s = settings(o);
            const std::string text = read_source(rig_input, in);
            const SingularityDocument doc = located(rig_input, [&] { return parse_singularity_document(text, s); });
            const IndexFormula f = formula_text == "corrected" ? IndexFormula::corrected : IndexFormula::as_printed;
            const RigidityReport r = rigidity_index(doc.points, genus.value_or(doc.genus), f, s);
            out << (o.json ? report_json(r, f).dump(2) : report_table(r, f)) << "\n";
            return kExitOk;
        };
    });

    // z-zhat
    auto* zz = app.add_subcommand("z-zhat", "Centralizer discrepancy Z - Z_hat (JSON with data and data_hat)");
    std::string zz_input = "-";
    zz->add_flag("--json", o.json, "Machine-readable output");
    zz->add_option("input", zz_input, "JSON document ('-' for stdin)");
    zz->callback([&] {
        action = [&] {
            const Settings s = settings(o);
            const std::string text = read_source(zz_input, in);
            const auto parsed = located(zz_input, [&] {
                const nlohmann::json doc = parse_json(text);
                if (!doc.is_object() || !doc.contains("data") || !doc.contains("data_hat")) {
                    throw ParseError("expected an object with 'data' and 'data_hat'", 1, 1, "$");
                }
                std::string sign = "minus";
                if (doc.contains("sign")) {
                    if (!doc.at("sign").is_string() ||
                        (doc.at("sign").get<std::string>() != "plus" && doc.at("sign").get<std::string>() != "minus")) {
                        throw ParseError("expected \"plus\" or \"minus\"", 1, 1, "$.sign");
                    }
                    sign = doc.at("sign").get<std::string>();
                }
                return std::make_tuple(singularity_points(doc.at("data"), "$.data", s),
                                       singularity_points(doc.at("data_hat"), "$.data_hat", s), parse_sign(sign));
            });
            const Discrepancy d = z_zhat_discrepancy(std::get<0>(parsed), std::get<1>(parsed), std::get<2>(parsed), s);
            if (o.json) {
                out << nlohmann::json{{"z", d.z}, {"z_hat", d.z_hat}, {"rhs", d.rhs}, {"discrepancy", d.value()}}.dump(2)
                    << "\n";
            } else {
                out << "Z\t" << d.z << "\nZ_hat\t" << d.z_hat << "\nclosed form\t" << d.rhs << "\ndiscrepancy\t"
                    << d.value() << "\n";
            }
            if (d.value() != 0) {
                throw InvariantError("Z - Z_hat differs from the closed form by " + std::to_string(d.value()));
            }
            return kExitOk;
        };
    });

    // oracle-check
    auto* oc = app.add_subcommand("oracle-check", "Operator-level cross-check of the exponential family");
    std::string a_text;
    long q = 1;
    bool grid = false;
    oc->add_option("--a", a_text, "Coefficient a of E^{a/t^q} (DSL scalar; use --a=-3/2 for negatives)");
    oc->add_option("--q", q, "Pole order q")->check(CLI::PositiveNumber);
    oc->add_flag("--grid", grid, "Run a in {1, 2, -3/2, zeta(3)} x q in 1..5");
    oc->add_flag("--json", o.json, "Machine-readable output");
    oc->callback([&] {
        action = [&] {
            std::vector<std::pair<FieldElement, long>> cases;
            if (grid) {
                for (const char* a : {"1", "2", "-3/2", "zeta(3)"}) {
                    for (long k = 1; k <= 5; ++k) {
                        cases.emplace_back(parse_scalar(a), k);
                    }
                }
            } else {
                if (a_text.empty()) {
                    throw DomainError("oracle-check needs --a <scalar> (or --grid)");
                }
                cases.emplace_back(located("--a", [&] { return parse_scalar(a_text); }), q);
            }
            bool all = true;
            nlohmann::json reports = nlohmann::json::array();
            for (const auto& [a, k] : cases) {
                const OracleReport r = oracle_check(a, k);
                all = all && r.passed();
                if (o.json) {
                    reports.push_back(oracle_json(r));
                } else {
                    out << r.to_string();
                }
            }
            if (o.json) {
                out << (grid ? reports : reports.front()).dump(2) << "\n";
            }
            if (!all) {
                throw InvariantError("oracle mismatch");
            }
            return kExitOk;
        };
    });

    try {
        try {
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err << "usage error: " << e.what() << "\n";
            return kExitParse;
        }
        if (prec_opt->count() > 0) {
            o.precision = precision;
        }
        return action ? action() : kExitOk;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const InvariantError& e) {
        err << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInvariant;
    }
}

} // namespace stphase
