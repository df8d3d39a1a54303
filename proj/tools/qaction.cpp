// Command-line front end: verify, classify, tables, iso.
// Exit codes: 0 success/verified/isomorphic, 1 failed/nonisomorphic,
// 2 input or precondition error, 3 branch limit exceeded.

#include "qaction/classify.hpp"
#include "qaction/document.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using json = nlohmann::ordered_json;
using namespace qa;

constexpr int kSchemaVersion = 1;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write " + path);
    out << text;
}

std::string machine(const json& j) { return j.dump(2) + "\n"; }

const char* tmode_name(TMode m) { return m == TMode::Zero ? "zero" : "nonzero"; }

json matrix_json(const ActionMatrix& m) {
    auto autom = [](const Automorphism& a) {
        return json{{"alpha", a.alpha.str()}, {"beta", a.beta.str()}, {"gamma", a.gamma.str()}, {"t", a.t.str()}};
    };
    auto images = [](const std::array<QPoly, 3>& p) {
        return json{{"x", p[0].str()}, {"y", p[1].str()}, {"z", p[2].str()}};
    };
    return json{{"K1", autom(m.K1)}, {"K2", autom(m.K2)}, {"E", images(m.E)}, {"F", images(m.F)}};
}

json signs_json(const std::array<int, 3>& s) { return json::array({s[0], s[1], s[2]}); }

// ---- verify ----

int cmd_verify(const std::string& file, int degree, const std::string& format, const std::string& out) {
    json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["command"] = json{{"name", "verify"}, {"file", file}, {"degree", degree}};
    ActionDocument doc;
    try {
        if (degree < 1) throw PreconditionFailed("degree bound must be at least 1");
        doc = parse_document(read_input(file));
    } catch (const Error& e) {
        rep["verdict"] = "error";
        rep["error"] = e.what();
        if (format == "machine") write_output(out, machine(rep));
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    VerificationReport r = verify_document(doc, degree);
    rep["q_mode"] = doc.q_value ? "rational q=" + doc.q_value->get_str() : "symbolic";
    rep["verdict"] = r.verified ? "verified" : "failed";
    json fails = json::array();
    for (const auto& f : r.failures)
        fails.push_back(json{{"relation", f.relation}, {"witness", f.witness.str()}, {"residual", f.residual.str()}});
    rep["failures"] = fails;
    if (format == "machine") {
        write_output(out, machine(rep));
    } else {
        std::ostringstream ss;
        ss << (r.verified ? "verified" : "failed") << " (degree bound " << degree << ", "
           << rep["q_mode"].get<std::string>() << ")\n";
        for (const auto& f : r.failures)
            ss << "  " << f.relation << " at " << f.witness.str() << ": " << f.residual.str() << "\n";
        write_output(out, ss.str());
    }
    return r.verified ? 0 : 1;
}

// ---- classify ----

json step_json(const CertStep& s) {
    json j;
    switch (s.kind) {
    case CertStep::Kind::Assume: j["kind"] = "assume"; break;
    case CertStep::Kind::Constraint: j["kind"] = "constraint"; break;
    case CertStep::Kind::Forced: j["kind"] = "forced"; break;
    case CertStep::Kind::Contradiction: j["kind"] = "contradiction"; break;
    case CertStep::Kind::Note: j["kind"] = "note"; break;
    }
    j["text"] = s.text;
    if (!s.relation.empty()) {
        j["relation"] = s.relation;
        j["witness"] = s.witness.str();
        j["residual"] = s.residual.str();
    }
    if (s.constraint) j["constraint"] = s.constraint->str();
    return j;
}

json report_json(const ClassificationReport& r, bool full_logs) {
    json j;
    j["t_mode"] = tmode_name(r.tmode);
    j["degree"] = r.degree_bound;
    j["total_series"] = r.total_series;
    j["empty_series"] = r.certificates.size();
    j["nonempty_series"] = r.nonempty;
    json fams = json::array();
    for (const auto& f : r.families) {
        json members = json::array();
        for (const auto& m : f.members)
            members.push_back(json{{"series", m.series},
                                   {"signs", signs_json(m.signs)},
                                   {"params", m.params},
                                   {"conditions", m.conditions},
                                   {"matrix", matrix_json(m.matrix)}});
        json signs = json::array();
        for (const auto& s : f.signs) signs.push_back(signs_json(s));
        fams.push_back(json{{"tag", f.tag},
                            {"printed", f.printed},
                            {"params", f.params},
                            {"signs", signs},
                            {"members", members}});
    }
    j["families"] = fams;
    json printed = json::array();
    for (const auto& m : r.printed.members)
        printed.push_back(json{{"family", m.family}, {"signs", signs_json(m.signs)}});
    j["printed_members"] = printed;
    j["printed_excluded"] = r.printed.excluded;
    json certs = json::array();
    for (const auto& c : r.certificates) {
        json branches = json::array();
        for (const auto& b : c.branches) {
            json bj{{"label", b.label}, {"steps", b.steps.size()}};
            if (!b.steps.empty()) bj["final"] = step_json(b.steps.back());
            if (full_logs) {
                json steps = json::array();
                for (const auto& s : b.steps) steps.push_back(step_json(s));
                bj["log"] = steps;
            }
            branches.push_back(bj);
        }
        certs.push_back(json{{"series", c.series}, {"notes", c.notes}, {"branches", branches}});
    }
    j["certificates"] = certs;
    return j;
}

std::string report_text(const ClassificationReport& r) {
    std::ostringstream ss;
    ss << "t-mode " << tmode_name(r.tmode) << ", degree bound " << r.degree_bound << "\n";
    ss << "  series: " << r.total_series << ", certified empty: " << r.certificates.size()
       << ", nonempty: " << r.nonempty.size() << "\n";
    for (const auto& n : r.nonempty) ss << "  nonempty series " << n << "\n";
    ss << "  families: " << r.families.size() << "\n";
    for (const auto& f : r.families) {
        ss << "  " << f.tag << (f.printed ? "" : " (not in the published list)") << ", " << f.members.size()
           << " member(s)\n";
        for (const auto& m : f.members) {
            ss << "    signs (" << m.signs[0] << ", " << m.signs[1] << ", " << m.signs[2] << ")  K1=" << m.matrix.K1.str()
               << "  K2=" << m.matrix.K2.str();
            for (int i = 0; i < 3; ++i)
                if (!m.matrix.E[i].is_zero()) ss << "  E(" << "xyz"[i] << ")=" << m.matrix.E[i].str();
            for (int i = 0; i < 3; ++i)
                if (!m.matrix.F[i].is_zero()) ss << "  F(" << "xyz"[i] << ")=" << m.matrix.F[i].str();
            for (const auto& c : m.conditions) ss << "  [" << c << "]";
            ss << "\n";
        }
    }
    ss << "  published families: " << r.printed.members.size() << " verified member(s), "
       << r.printed.excluded.size() << " excluded sign pattern(s)\n";
    for (const auto& e : r.printed.excluded) ss << "    excluded " << e << "\n";
    return ss.str();
}

int cmd_classify(const std::string& mode, int degree, const std::string& format, bool full_logs,
                 const std::string& out) {
    std::vector<TMode> modes;
    if (mode == "zero" || mode == "both") modes.push_back(TMode::Zero);
    if (mode == "nonzero" || mode == "both") modes.push_back(TMode::NonZero);
    json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["command"] = json{{"name", "classify"}, {"t_mode", mode}, {"degree", degree}};
    std::string text;
    json reports = json::array();
    try {
        for (TMode m : modes) {
            ClassificationReport r = run_classification(m, degree);
            reports.push_back(report_json(r, full_logs));
            text += report_text(r);
        }
    } catch (const BranchExplosion& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const PreconditionFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    rep["reports"] = reports;
    write_output(out, format == "machine" ? machine(rep) : text);
    return 0;
}

// ---- tables ----

struct Expected {
    std::size_t announced;
    std::size_t listed;
};

Expected expected_rows(TMode m, int degree) {
    if (m == TMode::Zero) return degree == 0 ? Expected{7, 7} : Expected{13, 13};
    return degree == 0 ? Expected{8, 8} : Expected{18, 17};
}

int cmd_tables(const std::string& mode, std::optional<int> degree, const std::string& format,
               const std::string& out) {
    std::vector<TMode> modes;
    if (mode == "zero" || mode == "both") modes.push_back(TMode::Zero);
    if (mode == "nonzero" || mode == "both") modes.push_back(TMode::NonZero);
    std::vector<int> degrees = degree ? std::vector<int>{*degree} : std::vector<int>{0, 1};

    json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["command"] = json{{"name", "tables"}, {"t_mode", mode}, {"degree", degree ? json(*degree) : json("all")}};
    json tables = json::array();
    std::ostringstream ss;
    for (TMode m : modes) {
        for (int d : degrees) {
            auto cases = enumerate_cases(d, m);
            Expected ex = expected_rows(m, d);
            json rows = json::array();
            ss << "t-mode " << tmode_name(m) << ", degree " << d << ": " << cases.size() << " derived, expected "
               << ex.announced;
            if (ex.listed != ex.announced) ss << " (table lists " << ex.listed << ")";
            std::vector<std::string> flags;
            if (cases.size() != ex.announced)
                flags.push_back("derived count " + std::to_string(cases.size()) + " differs from expected " +
                                std::to_string(ex.announced));
            if (cases.size() != ex.listed)
                flags.push_back("derived count " + std::to_string(cases.size()) + " differs from the " +
                                std::to_string(ex.listed) + " listed rows");
            ss << (flags.empty() ? "  ok\n" : "  FLAGGED\n");
            for (const auto& f : flags) ss << "  ! " << f << "\n";
            for (std::size_t i = 0; i < cases.size(); ++i) {
                const auto& c = cases[i];
                json implied = json::array();
                for (const auto& w : c.implied) implied.push_back(w.str());
                json formulas = json::object();
                for (const auto& [slot, v] : c.coefficient_formulas) formulas[slot.str()] = v.str();
                json side = json::array();
                for (const auto& s : c.side_conditions) side.push_back(s.str());
                json forced = json::array();
                for (const auto& s : c.forced_zero) forced.push_back(s.str());
                rows.push_back(json{{"case", c.label()},
                                    {"implied", implied},
                                    {"coefficients", formulas},
                                    {"side_conditions", side},
                                    {"forced_zero", forced}});
                ss << "  " << (i + 1) << ". " << c.label();
                for (const auto& w : c.implied) ss << "  " << w.str();
                for (const auto& [slot, v] : c.coefficient_formulas) ss << "  " << slot.str() << "=" << v.str();
                for (const auto& s : c.side_conditions) ss << "  0=" << s.str();
                ss << "\n";
            }
            tables.push_back(json{{"t_mode", tmode_name(m)},
                                  {"degree", d},
                                  {"derived", cases.size()},
                                  {"expected", ex.announced},
                                  {"listed", ex.listed},
                                  {"flags", flags},
                                  {"rows", rows}});
        }
    }
    rep["tables"] = tables;
    write_output(out, format == "machine" ? machine(rep) : ss.str());
    return 0;
}

// ---- iso ----

int cmd_iso(const std::string& a, const std::string& b, int degree, const std::string& format,
            const std::string& out) {
    json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["command"] = json{{"name", "iso"}, {"files", json::array({a, b})}, {"degree", degree}};
    try {
        std::array<IsoInvariant, 2> inv;
        const std::string files[2] = {a, b};
        for (int i = 0; i < 2; ++i) {
            ActionDocument doc = parse_document(read_input(files[i]));
            if (!verify_document(doc, degree).verified) throw PreconditionFailed(files[i] + " does not verify");
            ModuleAlgebraStructure s;
            s.matrix = doc.matrix;
            inv[i] = isomorphism_invariant(s);
        }
        bool iso = inv[0] == inv[1];
        rep["invariants"] = json::array({inv[0].str(), inv[1].str()});
        rep["verdict"] = iso ? "isomorphic" : "nonisomorphic";
        if (format == "machine")
            write_output(out, machine(rep));
        else
            write_output(out, std::string(iso ? "isomorphic" : "nonisomorphic") + "\n  " + inv[0].str() + "\n  " +
                                  inv[1].str() + "\n");
        return iso ? 0 : 1;
    } catch (const Error& e) {
        rep["verdict"] = "error";
        rep["error"] = e.what();
        if (format == "machine") write_output(out, machine(rep));
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"X_q(A_1) module-algebra structures on C_q[x,y,z]"};
    app.require_subcommand(1);
    std::string format = "text", out;
    int degree = 6;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
        sub->add_option("-o,--output", out, "output file (default stdout)");
    };

    auto* verify = app.add_subcommand("verify", "verify an action document");
    std::string file;
    verify->add_option("file", file, "action document, - for stdin")->required();
    verify->add_option("--degree", degree, "degree bound");
    add_common(verify);

    auto* classify = app.add_subcommand("classify", "run the classification");
    std::string tmode = "both";
    bool full_logs = false;
    classify->add_option("--t-mode", tmode)->check(CLI::IsMember({"zero", "nonzero", "both"}));
    classify->add_option("--degree", degree, "degree bound");
    classify->add_flag("--logs", full_logs, "include full certificate logs in machine output");
    add_common(classify);

    auto* tables = app.add_subcommand("tables", "derive the case tables");
    std::string tables_mode = "both";
    std::optional<int> tables_degree;
    tables->add_option("--t-mode", tables_mode)->check(CLI::IsMember({"zero", "nonzero", "both"}));
    tables->add_option("--degree", tables_degree, "0 or 1")->check(CLI::Range(0, 1));
    add_common(tables);

    auto* iso = app.add_subcommand("iso", "decide isomorphism of two classified structures");
    std::string fa, fb;
    iso->add_option("fileA", fa)->required();
    iso->add_option("fileB", fb)->required();
    iso->add_option("--degree", degree, "degree bound for verification");
    add_common(iso);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*verify) return cmd_verify(file, degree, format, out);
        if (*classify) return cmd_classify(tmode, degree, format, full_logs, out);
        if (*tables) return cmd_tables(tables_mode, tables_degree, format, out);
        if (*iso) return cmd_iso(fa, fb, degree, format, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
