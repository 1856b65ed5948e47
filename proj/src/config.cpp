#include "walls/config.hpp"

#include <set>

#include "json.hpp"

namespace walls {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error("ConfigParse", "malformed JSON");
    return j;
}

void expect_keys(const json& j, const std::set<std::string>& required,
                 const std::set<std::string>& optional = {}) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!required.count(it.key()) && !optional.count(it.key()))
            throw Error("ConfigParse", "unknown field '" + it.key() + "'");
    }
    for (const auto& k : required)
        if (!j.contains(k)) throw Error("ConfigParse", "missing field '" + k + "'");
}

LatticeVector to_vec(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error("ConfigParse", "lattice vector needs two entries");
    return {j[0].get<long long>(), j[1].get<long long>()};
}

RatPoint to_point(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error("ConfigParse", "point needs two entries");
    return {parse_rat(j[0].get<std::string>()), parse_rat(j[1].get<std::string>())};
}

Fan to_fan(const json& j) {
    expect_keys(j, {"rays"}, {"complete"});
    std::vector<LatticeVector> rays;
    for (const auto& r : j.at("rays")) rays.push_back(to_vec(r));
    bool complete = j.value("complete", true);
    return Fan(rays, complete);
}

}  // namespace

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(std::stoll(s));
        return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw Error("ConfigParse", "bad rational '" + s + "'");
    }
}

std::string schema_of(const std::string& text) {
    json j = parse(text);
    if (!j.contains("schema")) throw Error("ConfigParse", "missing schema tag");
    return j.at("schema").get<std::string>();
}

ToricModel load_toric_model(const std::string& text) {
    json j = parse(text);
    expect_keys(j, {"schema", "fan", "divisor_areas"}, {"blowup_points", "sphere_units"});
    if (j.at("schema") != "walls/toric-model/1") throw Error("ConfigParse", "wrong schema for a toric model");
    ToricModel m;
    m.fan = to_fan(j.at("fan"));
    for (const auto& a : j.at("divisor_areas")) m.divisor_areas.push_back(parse_rat(a.get<std::string>()));
    if (j.contains("blowup_points")) {
        for (const auto& bp : j.at("blowup_points")) {
            expect_keys(bp, {"ray", "position", "label"}, {"mult"});
            BlowupPoint p;
            p.ray_index = bp.at("ray").get<int>();
            p.position = parse_rat(bp.at("position").get<std::string>());
            p.mult = bp.value("mult", 1);
            p.label = bp.at("label").get<std::string>();
            m.blowup_points.push_back(std::move(p));
        }
    }
    if (j.contains("sphere_units")) {
        for (const auto& su : j.at("sphere_units")) {
            expect_keys(su, {"ray", "labels"});
            SphereUnit u;
            u.ray_index = su.at("ray").get<int>();
            for (const auto& l : su.at("labels")) u.labels.push_back(l.get<std::string>());
            m.sphere_units.push_back(std::move(u));
        }
    }
    m.validate();
    return m;
}

FixedData load_cluster_data(const std::string& text, Seed& seed_out) {
    json j = parse(text);
    expect_keys(j, {"schema", "rank", "skew", "d"}, {"seed"});
    if (j.at("schema") != "walls/cluster/1") throw Error("ConfigParse", "wrong schema for cluster data");
    FixedData data;
    data.n = j.at("rank").get<int>();
    for (const auto& row : j.at("skew")) {
        std::vector<Rat> r;
        for (const auto& v : row) r.push_back(parse_rat(v.get<std::string>()));
        data.skew.push_back(std::move(r));
    }
    for (const auto& v : j.at("d")) data.d.push_back(v.get<long long>());
    data.validate();
    if (j.contains("seed")) {
        Seed s;
        for (const auto& row : j.at("seed")) {
            std::vector<long long> r;
            for (const auto& v : row) r.push_back(v.get<long long>());
            s.e.push_back(std::move(r));
        }
        seed_out = std::move(s);
    } else {
        seed_out = identity_seed(data.n);
    }
    return data;
}

Dp5Params load_dp5_params(const std::string& text) {
    json j = parse(text);
    expect_keys(j, {"schema", "a", "b", "c", "a1", "b1"}, {"a2", "b2", "t_numeric"});
    if (j.at("schema") != "walls/dp5/1") throw Error("ConfigParse", "wrong schema for dp5 parameters");
    Dp5Params p;
    p.a = parse_rat(j.at("a").get<std::string>());
    p.b = parse_rat(j.at("b").get<std::string>());
    p.c = parse_rat(j.at("c").get<std::string>());
    p.a1 = parse_rat(j.at("a1").get<std::string>());
    p.b1 = parse_rat(j.at("b1").get<std::string>());
    p.a2 = j.contains("a2") ? parse_rat(j.at("a2").get<std::string>()) : p.a1;
    p.b2 = j.contains("b2") ? parse_rat(j.at("b2").get<std::string>()) : p.b1;
    if (j.contains("t_numeric")) p.t_numeric = j.at("t_numeric").get<double>();
    p.validate();
    return p;
}

BlowupChain load_chain(const std::string& text, RatPoint& stop_out) {
    json j = parse(text);
    expect_keys(j, {"schema", "fano", "added_rays", "constraint_points", "stop"}, {"degree_bound"});
    if (j.at("schema") != "walls/chain/1") throw Error("ConfigParse", "wrong schema for a blowup chain");
    BlowupChain chain;
    chain.fano = to_fan(j.at("fano"));
    for (const auto& r : j.at("added_rays")) chain.added_rays.push_back(to_vec(r));
    for (const auto& p : j.at("constraint_points")) chain.constraint_points.push_back(to_point(p));
    chain.degree_bound = j.value("degree_bound", 4);
    stop_out = to_point(j.at("stop"));
    return chain;
}

std::string config_hash(const std::string& text, int order_cap) {
    json j = parse(text);
    std::string canon = j.dump();
    canon += "#order=" + std::to_string(order_cap);
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

}  // namespace walls
