#include "qaction/document.hpp"

#include <json.hpp>

#include <set>

namespace qa {

namespace {

using json = nlohmann::ordered_json;

const char* const kAutoKeys[4] = {"alpha", "beta", "gamma", "t"};
const char* const kGenKeys[3] = {"x", "y", "z"};

const json& member(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + " must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(where + " lacks \"" + key + "\"");
    return *it;
}

std::string text_of(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw SchemaError(where + " must be an expression string");
}

template <class F>
auto located(const std::string& where, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const SyntaxError& e) {
        throw SchemaError(where + ": " + e.what());
    } catch (const UnknownSymbol& e) {
        throw SchemaError(where + ": " + e.what());
    }
}

Automorphism read_auto(const json& obj, const std::string& name, const ParamSet& ps) {
    Automorphism a;
    Scalar* slots[4] = {&a.alpha, &a.beta, &a.gamma, &a.t};
    for (int i = 0; i < 4; ++i) {
        std::string where = name + "." + kAutoKeys[i];
        const json& v = member(obj, kAutoKeys[i], name);
        std::string src = text_of(v, where);
        *slots[i] = located(where, [&] { return parse_scalar(src, ps); });
    }
    return a;
}

std::array<QPoly, 3> read_images(const json& obj, const std::string& name, const ParamSet& ps) {
    std::array<QPoly, 3> out;
    for (int i = 0; i < 3; ++i) {
        std::string where = name + "." + kGenKeys[i];
        std::string src = text_of(member(obj, kGenKeys[i], name), where);
        out[i] = located(where, [&] { return parse_qpoly(src, ps); });
    }
    return out;
}

void require_units(const Automorphism& a, const std::string& name, const std::optional<mpq_class>& q) {
    const Scalar* slots[3] = {&a.alpha, &a.beta, &a.gamma};
    for (int i = 0; i < 3; ++i) {
        Scalar v = *slots[i];
        if (q) v = v.specialize(std::map<Var, mpq_class>{{Symbols::q, *q}});
        if (v.is_zero()) throw InvalidAutomorphism(name + "." + kAutoKeys[i] + " vanishes");
    }
}

}  // namespace

ActionDocument parse_document(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SyntaxError(std::string("malformed document: ") + e.what(), e.byte);
    }
    if (!root.is_object()) throw SchemaError("document must be an object");

    ActionDocument doc;
    std::string mode = text_of(member(root, "q_mode", "document"), "q_mode");
    if (mode == "rational") {
        std::string v = text_of(member(root, "q", "document"), "q");
        try {
            doc.q_value = mpq_class(v);
            doc.q_value->canonicalize();
        } catch (const std::invalid_argument&) {
            throw SchemaError("q must be a rational literal p/r");
        }
        if (*doc.q_value == 0 || *doc.q_value == 1 || *doc.q_value == -1) throw InadmissibleQ();
    } else if (mode != "symbolic") {
        throw SchemaError("q_mode must be \"symbolic\" or \"rational\"");
    }

    std::vector<std::string> names;
    if (auto it = root.find("parameters"); it != root.end()) {
        if (!it->is_array()) throw SchemaError("parameters must be an array of names");
        for (const auto& n : *it) {
            if (!n.is_string()) throw SchemaError("parameters must be an array of names");
            names.push_back(n.get<std::string>());
        }
    }
    doc.params = ParamSet(names);

    doc.matrix.K1 = read_auto(member(root, "K1", "document"), "K1", doc.params);
    doc.matrix.K2 = read_auto(member(root, "K2", "document"), "K2", doc.params);
    doc.matrix.E = read_images(member(root, "E", "document"), "E", doc.params);
    doc.matrix.F = read_images(member(root, "F", "document"), "F", doc.params);
    require_units(doc.matrix.K1, "K1", doc.q_value);
    require_units(doc.matrix.K2, "K2", doc.q_value);
    return doc;
}

std::string render_document(const ActionDocument& doc) {
    json root;
    if (doc.q_value) {
        root["q_mode"] = "rational";
        root["q"] = doc.q_value->get_str();
    } else {
        root["q_mode"] = "symbolic";
    }
    root["parameters"] = doc.params.names();
    auto put_auto = [&](const char* name, const Automorphism& a) {
        const Scalar* slots[4] = {&a.alpha, &a.beta, &a.gamma, &a.t};
        json o;
        for (int i = 0; i < 4; ++i) o[kAutoKeys[i]] = slots[i]->str();
        root[name] = o;
    };
    auto put_images = [&](const char* name, const std::array<QPoly, 3>& img) {
        json o;
        for (int i = 0; i < 3; ++i) o[kGenKeys[i]] = img[i].str();
        root[name] = o;
    };
    put_auto("K1", doc.matrix.K1);
    put_auto("K2", doc.matrix.K2);
    put_images("E", doc.matrix.E);
    put_images("F", doc.matrix.F);
    return root.dump(2) + "\n";
}

ActionDocument document_of(const ActionMatrix& m) {
    std::set<Var> vs;
    auto add = [&](const Scalar& s) {
        auto v = s.vars();
        vs.insert(v.begin(), v.end());
    };
    for (const Automorphism* a : {&m.K1, &m.K2})
        for (const Scalar* s : {&a->alpha, &a->beta, &a->gamma, &a->t}) add(*s);
    for (const auto* img : {&m.E, &m.F})
        for (const auto& p : *img)
            for (const auto& [mono, c] : p.terms()) add(c);
    std::vector<std::string> names;
    for (Var v : vs)
        if (v != Symbols::q) names.push_back(Symbols::name(v));
    ActionDocument doc;
    doc.params = ParamSet(names);
    doc.matrix = m;
    return doc;
}

VerificationReport verify_document(const ActionDocument& doc, int degree_bound) {
    if (doc.q_value) return verify_module_algebra_at(doc.matrix, degree_bound, *doc.q_value);
    return verify_module_algebra(doc.matrix, degree_bound);
}

}  // namespace qa
