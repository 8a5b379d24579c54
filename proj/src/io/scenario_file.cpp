#include "scmdp/io/scenario_file.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace scmdp::io {

namespace {

std::string key_path(const std::string& parent, std::string_view key) {
    return parent + "[\"" + std::string(key) + "\"]";
}

std::string index_path(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

void require_keys(const Json& obj, const std::string& path, std::initializer_list<std::string_view> required,
                  std::initializer_list<std::string_view> optional = {}) {
    if (!obj.is_object()) throw ScenarioError(path, "expected an object");
    for (const auto& key : required) {
        if (!obj.contains(std::string(key))) throw ScenarioError(path, "missing key '" + std::string(key) + "'");
    }
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (const auto& k : required) known = known || k == key;
        for (const auto& k : optional) known = known || k == key;
        if (!known) throw ScenarioError(key_path(path, key), "unknown key");
    }
}

const Json& array_at(const Json& obj, std::string_view key, const std::string& path) {
    const Json& value = obj.at(std::string(key));
    if (!value.is_array()) throw ScenarioError(key_path(path, key), "expected an array");
    return value;
}

std::string string_of(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ScenarioError(path, "expected a string");
    return j.get<std::string>();
}

Rational rational_of(const Json& j, const std::string& path) {
    try {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
        if (j.is_number_float()) {
            // Shortest round-trip spelling, read back as an exact decimal.
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), j.get<double>(), std::chars_format::fixed);
            return Rational::parse(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
        }
    } catch (const InputError& e) {
        throw ScenarioError(path, e.what());
    } catch (const std::overflow_error& e) {
        throw ScenarioError(path, e.what());
    }
    throw ScenarioError(path, "expected a rational string such as \"3/4\"");
}

std::vector<std::string> labels_of(const Json& doc, std::string_view key) {
    const std::string path = key_path("$", key);
    const Json& arr = array_at(doc, key, "$");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string label = string_of(arr[i], index_path(path, i));
        if (label.empty() || label.find(',') != std::string::npos) {
            throw ScenarioError(index_path(path, i), "labels must be non-empty and contain no commas");
        }
        if (!seen.insert(label).second) throw ScenarioError(index_path(path, i), "duplicate label '" + label + "'");
        out.push_back(std::move(label));
    }
    return out;
}

MonotoneTransform transform_of(const Json& t, const std::string& path) {
    if (!t.is_object() || !t.contains("kind")) throw ScenarioError(path, "expected an object with a 'kind'");
    const std::string kind = string_of(t.at("kind"), key_path(path, "kind"));
    try {
        if (kind == "identity") {
            require_keys(t, path, {"kind"});
            return MonotoneTransform::identity();
        }
        if (kind == "affine") {
            require_keys(t, path, {"kind", "a", "b"});
            return MonotoneTransform::affine(rational_of(t.at("a"), key_path(path, "a")),
                                             rational_of(t.at("b"), key_path(path, "b")));
        }
        if (kind == "odd-power") {
            require_keys(t, path, {"kind", "k"});
            if (!t.at("k").is_number_unsigned()) throw ScenarioError(key_path(path, "k"), "expected a positive integer");
            return MonotoneTransform::odd_power(t.at("k").get<unsigned>());
        }
        if (kind == "piecewise-linear") {
            require_keys(t, path, {"kind", "points"});
            const Json& pts = array_at(t, "points", path);
            std::vector<std::pair<Rational, Rational>> points;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const std::string p = index_path(key_path(path, "points"), i);
                if (!pts[i].is_array() || pts[i].size() != 2) throw ScenarioError(p, "expected [x, y]");
                points.emplace_back(rational_of(pts[i][0], index_path(p, 0)), rational_of(pts[i][1], index_path(p, 1)));
            }
            return MonotoneTransform::piecewise_linear(std::move(points));
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const InputError& e) {
        throw ScenarioError(path, e.what());
    }
    throw ScenarioError(key_path(path, "kind"), "unknown transform kind '" + kind + "'");
}

RewardSpec reward_of(const Json& r, const std::string& path, const std::map<std::string, std::size_t>& state_index,
                     const std::vector<Profile>& states) {
    if (!r.is_object() || !r.contains("kind")) throw ScenarioError(path, "expected an object with a 'kind'");
    const std::string kind = string_of(r.at("kind"), key_path(path, "kind"));
    if (kind == "utilitarian") {
        require_keys(r, path, {"kind"});
        return UtilitarianReward{};
    }
    if (kind == "quasi") {
        require_keys(r, path, {"kind", "transform"});
        return QuasiUtilitarianReward{transform_of(r.at("transform"), key_path(path, "transform"))};
    }
    if (kind == "tabular") {
        require_keys(r, path, {"kind", "values"}, {"extension"});
        TabularReward table;
        if (r.contains("extension")) {
            const std::string ext = string_of(r.at("extension"), key_path(path, "extension"));
            if (ext == "none") {
                table.extension = TabularExtension::None;
            } else if (ext == "nearest-by-sum") {
                table.extension = TabularExtension::NearestBySum;
            } else {
                throw ScenarioError(key_path(path, "extension"), "expected \"none\" or \"nearest-by-sum\"");
            }
        }
        const Json& values = r.at("values");
        const std::string vpath = key_path(path, "values");
        if (!values.is_object()) throw ScenarioError(vpath, "expected an object keyed by state name");
        for (const auto& [name, row] : values.items()) {
            const std::string rpath = key_path(vpath, name);
            const auto it = state_index.find(name);
            if (it == state_index.end()) throw ScenarioError(rpath, "unknown state '" + name + "'");
            if (!row.is_array()) throw ScenarioError(rpath, "expected an array of rewards");
            TabularReward::Entry entry{states[it->second], {}};
            for (std::size_t a = 0; a < row.size(); ++a) entry.values.push_back(rational_of(row[a], index_path(rpath, a)));
            table.entries.push_back(std::move(entry));
        }
        return table;
    }
    if (kind == "custom") {
        require_keys(r, path, {"kind", "expr"});
        try {
            return CustomReward{Expression::parse(string_of(r.at("expr"), key_path(path, "expr")))};
        } catch (const ScenarioError&) {
            throw;
        } catch (const InputError& e) {
            throw ScenarioError(key_path(path, "expr"), e.what());
        }
    }
    throw ScenarioError(key_path(path, "kind"), "unknown reward kind '" + kind + "'");
}

Json rational_json(const Rational& r) { return r.to_string(); }

Json transform_to_json(const MonotoneTransform& t) {
    Json out = Json::object();
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, IdentityTransform>) {
                out["kind"] = "identity";
            } else if constexpr (std::is_same_v<T, AffineTransform>) {
                out["kind"] = "affine";
                out["a"] = rational_json(k.a);
                out["b"] = rational_json(k.b);
            } else if constexpr (std::is_same_v<T, OddPowerTransform>) {
                out["kind"] = "odd-power";
                out["k"] = k.k;
            } else {
                out["kind"] = "piecewise-linear";
                out["points"] = Json::array();
                for (const auto& [x, y] : k.points) out["points"].push_back(Json::array({rational_json(x), rational_json(y)}));
            }
        },
        t.kind());
    return out;
}

}  // namespace

Scenario scenario_from_json(const Json& doc) {
    require_keys(doc, "$", {"members", "alternatives", "states", "kernel", "reward"}, {"gamma"});

    Scenario sc;
    SocialChoiceMDP& m = sc.mdp;
    const auto member_labels = labels_of(doc, "members");
    const auto alt_labels = labels_of(doc, "alternatives");
    for (std::size_t i = 0; i < member_labels.size(); ++i) m.members.push_back({i, member_labels[i]});
    for (std::size_t a = 0; a < alt_labels.size(); ++a) m.alternatives.push_back({a, alt_labels[a]});
    std::map<std::string, std::size_t> alt_index;
    for (std::size_t a = 0; a < alt_labels.size(); ++a) alt_index[alt_labels[a]] = a;

    std::map<std::string, std::size_t> state_index;
    const Json& states = array_at(doc, "states", "$");
    for (std::size_t s = 0; s < states.size(); ++s) {
        const std::string spath = index_path("$[\"states\"]", s);
        require_keys(states[s], spath, {"name", "utilities"});
        std::string name = string_of(states[s].at("name"), key_path(spath, "name"));
        if (name.empty() || name.find(',') != std::string::npos) {
            throw ScenarioError(key_path(spath, "name"), "state names must be non-empty and contain no commas");
        }
        if (!state_index.emplace(name, s).second) throw ScenarioError(key_path(spath, "name"), "duplicate state name");
        const Json& rows = array_at(states[s], "utilities", spath);
        const std::string upath = key_path(spath, "utilities");
        if (rows.size() != member_labels.size()) {
            throw ScenarioError(upath, "expected one utility row per member (" + std::to_string(member_labels.size()) + ")");
        }
        Profile p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string rpath = index_path(upath, i);
            if (!rows[i].is_array() || rows[i].size() != alt_labels.size()) {
                throw ScenarioError(rpath, "expected one utility per alternative (" + std::to_string(alt_labels.size()) + ")");
            }
            UtilityFunction u;
            for (std::size_t x = 0; x < rows[i].size(); ++x) u.values.push_back(rational_of(rows[i][x], index_path(rpath, x)));
            p.rows.push_back(std::move(u));
        }
        m.states.push_back(std::move(p));
        m.state_names.push_back(std::move(name));
    }

    const Json& kernel = doc.at("kernel");
    if (!kernel.is_object()) throw ScenarioError("$[\"kernel\"]", "expected an object keyed by \"state,action\"");
    for (const auto& [key, entries] : kernel.items()) {
        const std::string kpath = key_path("$[\"kernel\"]", key);
        const auto comma = key.find(',');
        if (comma == std::string::npos) throw ScenarioError(kpath, "key must look like \"state,action\"");
        const auto s_it = state_index.find(key.substr(0, comma));
        const auto a_it = alt_index.find(key.substr(comma + 1));
        if (s_it == state_index.end()) throw ScenarioError(kpath, "unknown state '" + key.substr(0, comma) + "'");
        if (a_it == alt_index.end()) throw ScenarioError(kpath, "unknown alternative '" + key.substr(comma + 1) + "'");
        if (m.kernel.has_row(s_it->second, a_it->second)) throw ScenarioError(kpath, "duplicate kernel row");
        if (!entries.is_array()) throw ScenarioError(kpath, "expected a list of [state, probability] pairs");
        KernelRow row;
        for (std::size_t k = 0; k < entries.size(); ++k) {
            const std::string epath = index_path(kpath, k);
            if (!entries[k].is_array() || entries[k].size() != 2) throw ScenarioError(epath, "expected [state, probability]");
            const std::string next = string_of(entries[k][0], index_path(epath, 0));
            const auto n_it = state_index.find(next);
            if (n_it == state_index.end()) throw ScenarioError(index_path(epath, 0), "unknown state '" + next + "'");
            row.push_back({n_it->second, rational_of(entries[k][1], index_path(epath, 1))});
        }
        m.kernel.set_row(s_it->second, a_it->second, std::move(row));
    }

    m.reward = reward_of(doc.at("reward"), "$[\"reward\"]", state_index, m.states);

    if (doc.contains("gamma")) {
        sc.gamma = rational_of(doc.at("gamma"), "$[\"gamma\"]");
        if (*sc.gamma <= 0 || *sc.gamma >= 1) throw ScenarioError("$[\"gamma\"]", "gamma must lie strictly between 0 and 1");
    }

    if (const auto report = validate_mdp(m); !report.ok()) {
        std::string msg = "scenario does not describe a valid MDP:";
        for (const auto& issue : report.issues) msg += "\n  " + issue.location + ": " + issue.message;
        throw ScenarioError("$", msg);
    }
    return sc;
}

Scenario parse_scenario(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ScenarioError("$", e.what());
    }
    try {
        return scenario_from_json(doc);
    } catch (const ScenarioError&) {
        throw;
    } catch (const Json::exception& e) {
        throw ScenarioError("$", e.what());
    }
}

Json reward_to_json(const RewardSpec& reward, const SocialChoiceMDP& m) {
    Json out = Json::object();
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, UtilitarianReward>) {
                out["kind"] = "utilitarian";
            } else if constexpr (std::is_same_v<T, QuasiUtilitarianReward>) {
                out["kind"] = "quasi";
                out["transform"] = transform_to_json(r.transform);
            } else if constexpr (std::is_same_v<T, TabularReward>) {
                out["kind"] = "tabular";
                Json values = Json::object();
                for (const auto& e : r.entries) {
                    const std::size_t s = m.find_state(e.profile);
                    if (s == SocialChoiceMDP::npos) throw InputError("tabular reward entry for a profile outside the state set");
                    Json row = Json::array();
                    for (const auto& v : e.values) row.push_back(rational_json(v));
                    values[m.state_names[s]] = std::move(row);
                }
                out["values"] = std::move(values);
                out["extension"] = r.extension == TabularExtension::None ? "none" : "nearest-by-sum";
            } else {
                out["kind"] = "custom";
                out["expr"] = r.expr.to_string();
            }
        },
        reward);
    return out;
}

Json scenario_to_json(const Scenario& sc) {
    const SocialChoiceMDP& m = sc.mdp;
    Json doc = Json::object();
    doc["members"] = Json::array();
    for (const auto& mem : m.members) doc["members"].push_back(mem.label);
    doc["alternatives"] = Json::array();
    for (const auto& alt : m.alternatives) doc["alternatives"].push_back(alt.label);
    doc["states"] = Json::array();
    for (std::size_t s = 0; s < m.states.size(); ++s) {
        Json rows = Json::array();
        for (const auto& row : m.states[s].rows) {
            Json r = Json::array();
            for (const auto& v : row.values) r.push_back(rational_json(v));
            rows.push_back(std::move(r));
        }
        Json state = Json::object();
        state["name"] = m.state_names[s];
        state["utilities"] = std::move(rows);
        doc["states"].push_back(std::move(state));
    }
    Json kernel = Json::object();
    for (const auto& [key, row] : m.kernel.rows()) {
        Json entries = Json::array();
        for (const auto& tr : row) entries.push_back(Json::array({m.state_names[tr.next_state], rational_json(tr.probability)}));
        kernel[m.state_names[key.first] + "," + m.alternatives[key.second].label] = std::move(entries);
    }
    doc["kernel"] = std::move(kernel);
    doc["reward"] = reward_to_json(m.reward, m);
    if (sc.gamma) doc["gamma"] = rational_json(*sc.gamma);
    return doc;
}

std::string serialize_scenario(const Scenario& scenario) { return scenario_to_json(scenario).dump(2) + "\n"; }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scenario load_scenario_file(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

void write_file_atomically(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw InputError("short write to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace scmdp::io
