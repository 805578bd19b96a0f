#pragma once

/**
 * @file model_io.hpp
 * @brief Loading model files (schema "mcat-model/1", see docs/model-schema.md)
 * into a Bundle plus its query list.
 *
 * Semantic errors carry the JSON pointer of the offending value; syntax
 * errors carry the line and column reported by the parser.
 */

#include "mcat/invariants.hpp"
#include "mcat/serialize.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcat {

inline constexpr const char* kModelSchema = "mcat-model/1";

class ModelError : public std::runtime_error {
public:
    ModelError(std::string pointer, const std::string& message)
        : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + message), pointer_(std::move(pointer)) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

struct Query {
    std::string target;
    Invariant invariant = Invariant::Cat;
    int from = 1;
    std::optional<int> to;
};

struct ModelFile {
    CoefficientDomain coeff;
    Bundle bundle;
    std::vector<Query> queries;
};

/// "3", "1..6", "2.." (open end).
inline std::pair<int, std::optional<int>> parse_range(const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || v < 1) throw std::invalid_argument("bad m-range '" + text + "'");
        return v;
    };
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const int v = number(text);
        return {v, v};
    }
    const int from = number(text.substr(0, dots));
    const std::string rest = text.substr(dots + 2);
    if (rest.empty()) return {from, std::nullopt};
    const int to = number(rest);
    if (to < from) throw std::invalid_argument("bad m-range '" + text + "'");
    return {from, to};
}

namespace detail {

inline std::string escape_pointer(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

class Loader {
public:
    Loader(const json& root, std::optional<CoefficientDomain> coeff_override) : root_(root) {
        if (!root.is_object()) throw ModelError("", "model file must be a JSON object");
        if (!root.contains("schema")) throw ModelError("", "missing \"schema\" (expected \"" + std::string(kModelSchema) + "\")");
        if (root.at("schema") != kModelSchema)
            throw ModelError("/schema", "unsupported schema " + root.at("schema").dump() + " (expected \"" + kModelSchema + "\")");
        for (const auto& [key, value] : root.items())
            if (key != "schema" && key != "coeff" && key != "spaces" && key != "fibrations" && key != "maps" &&
                key != "queries" && key != "description")
                throw ModelError("/" + escape_pointer(key), "unknown top-level key");
        coeff_ = coeff_override ? *coeff_override
                                : (root.contains("coeff") ? parse_coeff(root.at("coeff"), "/coeff") : CoefficientDomain::rationals());
        override_ = coeff_override.has_value();
    }

    ModelFile load() {
        ModelFile out;
        out.coeff = coeff_;
        for (const char* section : {"spaces", "fibrations", "maps"})
            if (root_.contains(section) && !root_.at(section).is_object())
                throw ModelError(std::string("/") + section, "must be an object keyed by name");
        if (root_.contains("spaces"))
            for (const auto& [key, value] : root_.at("spaces").items()) out.bundle.spaces.emplace(key, space(key));
        if (root_.contains("fibrations"))
            for (const auto& [key, value] : root_.at("fibrations").items()) out.bundle.fibrations.emplace(key, fibration(key));
        if (root_.contains("maps"))
            for (const auto& [key, value] : root_.at("maps").items()) out.bundle.maps.emplace(key, map_pair(key));
        for (const auto& [key, pair] : out.bundle.maps)
            for (std::size_t i = 0; i < pair.triangles.size(); ++i)
                for (const auto& name : {pair.triangles[i].first, pair.triangles[i].second})
                    if (!out.bundle.maps.count(name))
                        throw ModelError("/maps/" + escape_pointer(key) + "/triangle/" + std::to_string(i),
                                         "unknown map pair '" + name + "'");
        if (root_.contains("queries")) {
            const json& qs = root_.at("queries");
            if (!qs.is_array()) throw ModelError("/queries", "must be an array");
            for (std::size_t i = 0; i < qs.size(); ++i) out.queries.push_back(query(qs[i], "/queries/" + std::to_string(i), out.bundle));
        }
        return out;
    }

private:
    static CoefficientDomain parse_coeff(const json& j, const std::string& path) {
        if (!j.is_string()) throw ModelError(path, "coefficient domain must be a string such as \"Q\", \"Z\", \"F2\"");
        try {
            return CoefficientDomain::parse(j.get<std::string>());
        } catch (const AlgebraError& e) {
            throw ModelError(path, e.what());
        }
    }

    CoefficientDomain coeff_at(const json& obj, const std::string& path) const {
        if (!override_ && obj.contains("coeff")) return parse_coeff(obj.at("coeff"), path + "/coeff");
        return coeff_;
    }

    static int integer(const json& obj, const char* key, const std::string& path) {
        if (!obj.contains(key)) throw ModelError(path, std::string("missing integer \"") + key + "\"");
        const json& v = obj.at(key);
        if (!v.is_number_integer()) throw ModelError(path + "/" + key, "must be an integer");
        return v.get<int>();
    }

    static std::optional<int> opt_integer(const json& obj, const char* key, const std::string& path) {
        if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
        return integer(obj, key, path);
    }

    static bool boolean(const json& obj, const char* key, const std::string& path, bool fallback) {
        if (!obj.contains(key)) return fallback;
        if (!obj.at(key).is_boolean()) throw ModelError(path + "/" + key, "must be true or false");
        return obj.at(key).get<bool>();
    }

    static std::string string(const json& obj, const char* key, const std::string& path) {
        if (!obj.contains(key) || !obj.at(key).is_string())
            throw ModelError(path + (obj.contains(key) ? std::string("/") + key : std::string()),
                             std::string("\"") + key + "\" must be a string");
        return obj.at(key).get<std::string>();
    }

    Scalar scalar(const json& v, const CoefficientDomain& coeff, const std::string& path) const {
        try {
            if (v.is_number_integer()) return coeff.normalize(Scalar(v.get<long long>()));
            if (v.is_string()) return coeff.parse_scalar(v.get<std::string>());
        } catch (const AlgebraError& e) {
            throw ModelError(path, e.what());
        }
        throw ModelError(path, "coefficient must be an integer or a string like \"1/2\"");
    }

    GradedAlgebra algebra(const json& j, const std::string& path) const {
        if (!j.is_object()) throw ModelError(path, "algebra must be an object");
        AlgebraSpec spec;
        spec.coeff = coeff_at(j, path);
        if (!j.contains("basis") || !j.at("basis").is_array()) throw ModelError(path, "algebra needs \"basis\": list of per-degree name lists");
        const json& basis = j.at("basis");
        for (std::size_t d = 0; d < basis.size(); ++d) {
            const std::string p = path + "/basis/" + std::to_string(d);
            if (!basis[d].is_array()) throw ModelError(p, "must be a list of basis names");
            std::vector<std::string> names;
            for (std::size_t i = 0; i < basis[d].size(); ++i) {
                if (!basis[d][i].is_string()) throw ModelError(p + "/" + std::to_string(i), "basis names must be strings");
                names.push_back(basis[d][i].get<std::string>());
            }
            spec.basis.push_back(std::move(names));
        }
        std::vector<std::string> product_paths;
        if (j.contains("products")) {
            const json& ps = j.at("products");
            if (!ps.is_array()) throw ModelError(path + "/products", "must be a list");
            for (std::size_t k = 0; k < ps.size(); ++k) {
                const std::string p = path + "/products/" + std::to_string(k);
                const json& e = ps[k];
                if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string())
                    throw ModelError(p, "product must be [left, right, result] where result is a name or {name: coefficient}");
                AlgebraSpec::Product prod{e[0].get<std::string>(), e[1].get<std::string>(), {}};
                if (e[2].is_string()) {
                    prod.result.emplace_back(e[2].get<std::string>(), Scalar(1));
                } else if (e[2].is_object()) {
                    for (const auto& [name, c] : e[2].items()) prod.result.emplace_back(name, scalar(c, spec.coeff, p + "/2/" + escape_pointer(name)));
                } else if (!(e[2].is_number_integer() && e[2].get<long long>() == 0)) {
                    throw ModelError(p + "/2", "result must be a basis name, {name: coefficient} or 0");
                }
                spec.products.push_back(std::move(prod));
                product_paths.push_back(p);
            }
        }
        try {
            return make_algebra(spec);
        } catch (const AlgebraError& e) {
            // point at the listed product that mentions the offending pair, if any
            const std::string what = e.what();
            for (std::size_t k = 0; k < spec.products.size(); ++k) {
                const auto& pr = spec.products[k];
                if (what.find("(" + pr.left + ", " + pr.right) != std::string::npos ||
                    what.find("(" + pr.right + ", " + pr.left) != std::string::npos ||
                    what.find(pr.left + "*" + pr.right) != std::string::npos)
                    throw ModelError(product_paths[k], what);
            }
            throw ModelError(path, what);
        }
    }

    void apply_metadata(SpaceModel& x, const json& j, const std::string& path) {
        if (j.contains("conn"))
            x.conn = j.at("conn") == "contractible" ? kContractible : integer(j, "conn", path);
        if (j.contains("hdim")) x.hdim = opt_integer(j, "hdim", path);
        if (j.contains("pi_vanish_from")) x.pi_vanish_from = opt_integer(j, "pi_vanish_from", path);
        if (j.contains("aspherical") && boolean(j, "aspherical", path, false)) x.pi_vanish_from = 2;
        x.h_space_with_division = boolean(j, "h_space_with_division", path, x.h_space_with_division);
        if (j.contains("known_cat")) x.known_cat = opt_integer(j, "known_cat", path);
        if (j.contains("known_tc")) x.known_tc = opt_integer(j, "known_tc", path);
        if (j.contains("square")) {
            const std::string sq = string(j, "square", path);
            x.square = std::make_shared<const SpaceModel>(space(sq, path + "/square"));
        }
    }

    SpaceModel construct(const json& j, const std::string& path) {
        const std::string kind = string(j, "construct", path);
        const CoefficientDomain coeff = coeff_at(j, path);
        try {
            if (kind == "sphere") return sphere(integer(j, "n", path), coeff);
            if (kind == "real_projective") return real_projective(integer(j, "n", path));
            if (kind == "complex_projective") return complex_projective(integer(j, "n", path));
            if (kind == "moore") return moore(integer(j, "rank", path), integer(j, "n", path), coeff);
            if (kind == "orientable_surface") return orientable_surface(integer(j, "g", path));
            if (kind == "nonorientable_surface") return nonorientable_surface(integer(j, "h", path));
            if (kind == "point") return point(coeff);
            if (kind == "product") {
                if (!j.contains("factors") || !j.at("factors").is_array() || j.at("factors").empty())
                    throw ModelError(path, "product needs a nonempty \"factors\" list of space names");
                std::vector<SpaceModel> parts;
                const json& fs = j.at("factors");
                for (std::size_t i = 0; i < fs.size(); ++i) {
                    const std::string p = path + "/factors/" + std::to_string(i);
                    if (!fs[i].is_string()) throw ModelError(p, "factor must be a space name");
                    parts.push_back(space(fs[i].get<std::string>(), p));
                }
                return product(parts);
            }
        } catch (const AlgebraError& e) {
            throw ModelError(path, e.what());
        }
        throw ModelError(path + "/construct", "unknown constructor '" + kind +
                                                  "' (sphere, real_projective, complex_projective, moore, "
                                                  "orientable_surface, nonorientable_surface, point, product)");
    }

    SpaceModel space(const std::string& name, const std::string& from = {}) {
        if (const auto it = spaces_.find(name); it != spaces_.end()) return it->second;
        const std::string path = "/spaces/" + escape_pointer(name);
        if (!root_.contains("spaces") || !root_.at("spaces").contains(name))
            throw ModelError(from.empty() ? path : from, "unknown space '" + name + "'");
        if (!visiting_.insert(name).second) throw ModelError(path, "space '" + name + "' refers to itself");
        const json& j = root_.at("spaces").at(name);
        if (!j.is_object()) throw ModelError(path, "space definition must be an object");
        SpaceModel x;
        if (j.contains("construct")) {
            x = construct(j, path);
        } else if (j.contains("algebra")) {
            x.algebra = algebra(j.at("algebra"), path + "/algebra");
            if (j.contains("factors")) {
                const json& fs = j.at("factors");
                if (!fs.is_array()) throw ModelError(path + "/factors", "must be a list of space names");
                std::vector<SpaceModel> parts;
                for (std::size_t i = 0; i < fs.size(); ++i) {
                    if (!fs[i].is_string()) throw ModelError(path + "/factors/" + std::to_string(i), "factor must be a space name");
                    parts.push_back(space(fs[i].get<std::string>(), path + "/factors/" + std::to_string(i)));
                }
                SpaceModel expected;
                try {
                    expected = product(parts);
                } catch (const AlgebraError& e) {
                    throw ModelError(path + "/factors", e.what());
                }
                if (!expected.algebra.same_structure(x.algebra))
                    throw ModelError(path + "/factors", "algebra is not the Künneth product of the declared factors");
                x.factors = expected.factors;
                x.conn = expected.conn;
                x.hdim = expected.hdim;
                x.pi_vanish_from = expected.pi_vanish_from;
            }
        } else {
            throw ModelError(path, "space needs either \"construct\" or \"algebra\"");
        }
        x.name = name;
        apply_metadata(x, j, path);
        try {
            validate(x);
        } catch (const AlgebraError& e) {
            throw ModelError(path, e.what());
        }
        visiting_.erase(name);
        spaces_.emplace(name, x);
        return x;
    }

    RingMorphism morphism(const json& j, const GradedAlgebra& source, const GradedAlgebra& target, const std::string& path) {
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            if (s == "zero" || s == "constant" || s == "augmentation") return augmentation(source, target);
            if (s == "identity") {
                if (!source.same_structure(target)) throw ModelError(path, "identity needs equal source and target algebras");
                return identity_morphism(source);
            }
            throw ModelError(path, "unknown morphism '" + s + "' (identity, constant, or {\"images\": ...})");
        }
        if (!j.is_object() || !j.contains("images") || !j.at("images").is_object())
            throw ModelError(path, "morphism must be \"identity\", \"constant\" or {\"images\": {source: {target: coefficient}}}");
        std::vector<Element> images(source.total_dimension(), Element(target));
        images[0] = Element::unit(target);
        for (const auto& [src, img] : j.at("images").items()) {
            const std::string p = path + "/images/" + escape_pointer(src);
            const auto g = source.find(src);
            if (!g) throw ModelError(p, "unknown source basis element '" + src + "'");
            Element e(target);
            if (img.is_string()) {
                const auto t = target.find(img.get<std::string>());
                if (!t) throw ModelError(p, "unknown target basis element '" + img.get<std::string>() + "'");
                e = Element::basis(target, *t);
            } else if (img.is_object()) {
                for (const auto& [tname, c] : img.items()) {
                    const auto t = target.find(tname);
                    if (!t) throw ModelError(p + "/" + escape_pointer(tname), "unknown target basis element '" + tname + "'");
                    e = e + Element::basis(target, *t).scaled(scalar(c, target.coeff(), p + "/" + escape_pointer(tname)));
                }
            } else if (!(img.is_number_integer() && img.get<long long>() == 0)) {
                throw ModelError(p, "image must be a basis name, {name: coefficient} or 0");
            }
            images[*g] = e;
        }
        try {
            return RingMorphism::from_images(source, target, images);
        } catch (const AlgebraError& e) {
            throw ModelError(path, e.what());
        }
    }

    FibrationModel fibration(const std::string& name) {
        if (const auto it = fibrations_.find(name); it != fibrations_.end()) return it->second;
        const std::string path = "/fibrations/" + escape_pointer(name);
        if (!root_.contains("fibrations") || !root_.at("fibrations").contains(name))
            throw ModelError(path, "unknown fibration '" + name + "'");
        if (!fib_visiting_.insert(name).second) throw ModelError(path, "fibration '" + name + "' refers to itself");
        const json& j = root_.at("fibrations").at(name);
        if (!j.is_object()) throw ModelError(path, "fibration definition must be an object");
        FibrationModel p;
        try {
            if (j.contains("construct")) {
                const std::string kind = string(j, "construct", path);
                if (kind == "covering_map") p = covering_map(integer(j, "n", path));
                else if (kind == "hopf") p = hopf_fibration(integer(j, "n", path));
                else if (kind == "free_path") p = free_path_fibration(space(string(j, "space", path), path + "/space"));
                else throw ModelError(path + "/construct", "unknown fibration constructor '" + kind + "' (covering_map, hopf, free_path)");
            } else {
                p.base = space(string(j, "base", path), path + "/base");
                if (!j.contains("total")) throw ModelError(path, "fibration needs \"total\" (space name or algebra)");
                const json& total = j.at("total");
                p.total_algebra = total.is_string() ? space(total.get<std::string>(), path + "/total").algebra
                                                    : algebra(total, path + "/total");
                if (!j.contains("pstar")) throw ModelError(path, "fibration needs \"pstar\"");
                p.pstar = morphism(j.at("pstar"), p.base.algebra, p.total_algebra, path + "/pstar");
            }
        } catch (const AlgebraError& e) {
            throw ModelError(path, e.what());
        }
        p.name = name;
        p.total_contractible = boolean(j, "total_contractible", path, p.total_contractible);
        if (j.contains("fiber_pi_vanish_from")) p.fiber_pi_vanish_from = opt_integer(j, "fiber_pi_vanish_from", path);
        if (j.contains("known_secat")) p.known_secat = opt_integer(j, "known_secat", path);
        if (j.contains("factors")) {
            const json& fs = j.at("factors");
            if (!fs.is_array()) throw ModelError(path + "/factors", "must be a list of fibration names");
            for (std::size_t i = 0; i < fs.size(); ++i) {
                if (!fs[i].is_string()) throw ModelError(path + "/factors/" + std::to_string(i), "must be a fibration name");
                p.factors.push_back(fibration(fs[i].get<std::string>()));
            }
        }
        try {
            validate(p);
        } catch (const AlgebraError& e) {
            throw ModelError(path, e.what());
        }
        fib_visiting_.erase(name);
        fibrations_.emplace(name, p);
        return p;
    }

    MapPairModel map_pair(const std::string& name) {
        const std::string path = "/maps/" + escape_pointer(name);
        const json& j = root_.at("maps").at(name);
        if (!j.is_object()) throw ModelError(path, "map pair definition must be an object");
        MapPairModel pair;
        pair.name = name;
        pair.domain = space(string(j, "domain", path), path + "/domain");
        pair.codomain = space(string(j, "codomain", path), path + "/codomain");
        for (const char* key : {"f", "g"}) {
            if (!j.contains(key)) throw ModelError(path, std::string("map pair needs \"") + key + "\"");
            const json& m = j.at(key);
            RingMorphism r = morphism(m, pair.codomain.algebra, pair.domain.algebra, path + "/" + key);
            MapKind kind = MapKind::General;
            if (m.is_string()) kind = m.get<std::string>() == "identity" ? MapKind::Identity : MapKind::Constant;
            if (key[0] == 'f') {
                pair.fstar = std::move(r);
                pair.f_kind = kind;
            } else {
                pair.gstar = std::move(r);
                pair.g_kind = kind;
            }
        }
        pair.homotopic = boolean(j, "homotopic", path, false);
        if (j.contains("known_d")) pair.known_d = opt_integer(j, "known_d", path);
        if (j.contains("triangle")) {
            const json& ts = j.at("triangle");
            if (!ts.is_array()) throw ModelError(path + "/triangle", "must be a list of [f_h, h_g] map-pair name pairs");
            for (std::size_t i = 0; i < ts.size(); ++i) {
                const json& t = ts[i];
                if (!t.is_array() || t.size() != 2 || !t[0].is_string() || !t[1].is_string())
                    throw ModelError(path + "/triangle/" + std::to_string(i), "must be [f_h, h_g] map-pair names");
                pair.triangles.emplace_back(t[0].get<std::string>(), t[1].get<std::string>());
            }
        }
        try {
            validate(pair);
        } catch (const AlgebraError& e) {
            throw ModelError(path, e.what());
        }
        return pair;
    }

    Query query(const json& q, const std::string& path, const Bundle& bundle) const {
        if (!q.is_object()) throw ModelError(path, "query must be an object");
        Query out;
        out.target = string(q, "target", path);
        const auto inv = parse_invariant(string(q, "invariant", path));
        if (!inv) throw ModelError(path + "/invariant", "unknown invariant (cat, tc, secat, dm, hdm)");
        out.invariant = *inv;
        if (q.contains("m")) {
            try {
                const auto [from, to] = parse_range(q.at("m").is_string() ? q.at("m").get<std::string>() : q.at("m").dump());
                out.from = from;
                out.to = to;
            } catch (const std::invalid_argument& e) {
                throw ModelError(path + "/m", e.what());
            }
        }
        const bool space_inv = out.invariant == Invariant::Cat || out.invariant == Invariant::Tc;
        const bool ok = space_inv ? bundle.spaces.count(out.target) > 0
                                  : out.invariant == Invariant::Secat ? bundle.fibrations.count(out.target) > 0
                                                                      : bundle.maps.count(out.target) > 0;
        if (!ok) throw ModelError(path + "/target", "no " + std::string(space_inv ? "space" : out.invariant == Invariant::Secat ? "fibration" : "map pair") +
                                                        " named '" + out.target + "'");
        return out;
    }

    const json& root_;
    CoefficientDomain coeff_;
    bool override_ = false;
    std::map<std::string, SpaceModel> spaces_;
    std::map<std::string, FibrationModel> fibrations_;
    std::set<std::string> visiting_;
    std::set<std::string> fib_visiting_;
};

} // namespace detail

inline ModelFile load_model(const json& root, std::optional<CoefficientDomain> coeff_override = std::nullopt) {
    detail::Loader loader(root, coeff_override);
    return loader.load();
}

/// Parses text; syntax errors become ModelError with the parser's position.
inline ModelFile load_model_text(const std::string& text, std::optional<CoefficientDomain> coeff_override = std::nullopt) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ModelError("", std::string("JSON syntax error: ") + e.what());
    }
    return load_model(root, coeff_override);
}

inline ModelFile load_model_file(const std::string& path, std::optional<CoefficientDomain> coeff_override = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw ModelError("", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_model_text(ss.str(), coeff_override);
}

} // namespace mcat
