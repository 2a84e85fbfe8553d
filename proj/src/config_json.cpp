#include "mcmod/config_json.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "mcmod/engine.hpp"
#include "mcmod/presets.hpp"

namespace mcmod {
namespace {

using Json = nlohmann::ordered_json;

const std::set<std::string> required_fields = {"N",  "M_prime", "P",  "K",  "e",  "M1",  "L1", "Q1",  "Nc1",
                                               "M2", "L2",      "Q2", "Nc2", "E2", "E4", "b_tran"};

const std::set<std::string> optional_fields = {
    "name",   "h1",     "h1_file", "g",      "g_file",  "o1",     "a1",     "b_conj1", "b_cas1",
    "o2",     "a2",     "b_conj2", "b_cas2", "N_zp1",   "N_cp1",  "N_cs1",  "N_zs1",   "N_zp2",
    "N_cp2",  "N_cs2",  "N_zs2",   "N_zp3",  "N_cp3",   "N_cs3",  "N_zs3",  "E3",      "w"};

class Reader {
  public:
    Reader(const Json& doc, std::filesystem::path base) : doc_(doc), base_(std::move(base)) {}

    std::vector<std::string>& errors() { return errors_; }

    bool has(const std::string& key) const { return doc_.contains(key); }

    Index integer(const std::string& key, Index fallback = 0) {
        if (!has(key)) return fallback;
        const auto& v = doc_.at(key);
        if (!v.is_number_integer()) {
            errors_.push_back(key + ": expected an integer");
            return fallback;
        }
        return v.get<Index>();
    }

    bool flag(const std::string& key) {
        if (!has(key)) return false;
        const auto& v = doc_.at(key);
        if (v.is_boolean()) return v.get<bool>();
        if (v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1)) return v.get<int>() == 1;
        errors_.push_back(key + ": expected a Boolean (true/false or 0/1)");
        return false;
    }

    std::vector<Index> indices(const std::string& key, std::vector<Index> fallback) {
        if (!has(key)) return fallback;
        const auto& v = doc_.at(key);
        std::vector<Index> out;
        if (!v.is_array()) {
            errors_.push_back(key + ": expected an array of integers");
            return fallback;
        }
        for (const auto& x : v) {
            if (!x.is_number_integer()) {
                errors_.push_back(key + ": expected an array of integers");
                return fallback;
            }
            out.push_back(x.get<Index>());
        }
        return out;
    }

    std::optional<cd> scalar(const Json& v) {
        if (v.is_number()) return cd(v.get<double>(), 0.0);
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return cd(v[0].get<double>(), v[1].get<double>());
        return std::nullopt;
    }

    VectorXcd vector(const std::string& key) {
        const auto& v = doc_.at(key);
        if (!v.is_array()) {
            errors_.push_back(key + ": expected an array");
            return {};
        }
        VectorXcd out(static_cast<Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto s = scalar(v[i]);
            if (!s) {
                errors_.push_back(key + "[" + std::to_string(i) + "]: expected a number or [re, im]");
                return {};
            }
            out(static_cast<Index>(i)) = *s;
        }
        return out;
    }

    MatrixXcd matrix(const std::string& key) {
        const auto& v = doc_.at(key);
        if (!v.is_array()) {
            errors_.push_back(key + ": expected an array of rows");
            return {};
        }
        if (v.empty()) return {};
        const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
        MatrixXcd out(static_cast<Index>(v.size()), static_cast<Index>(cols));
        for (std::size_t r = 0; r < v.size(); ++r) {
            if (!v[r].is_array() || v[r].size() != cols) {
                errors_.push_back(key + ": rows must be arrays of equal length");
                return {};
            }
            for (std::size_t c = 0; c < cols; ++c) {
                const auto s = scalar(v[r][c]);
                if (!s) {
                    errors_.push_back(key + "[" + std::to_string(r) + "][" + std::to_string(c) +
                                      "]: expected a number or [re, im]");
                    return {};
                }
                out(static_cast<Index>(r), static_cast<Index>(c)) = *s;
            }
        }
        return out;
    }

    VectorXcd filter(const std::string& key, const std::string& file_key) {
        if (has(key) && has(file_key)) {
            errors_.push_back(key + ": give either " + key + " or " + file_key + ", not both");
            return VectorXcd::Ones(1);
        }
        if (has(file_key)) {
            const auto& v = doc_.at(file_key);
            if (!v.is_string()) {
                errors_.push_back(file_key + ": expected a path string");
                return VectorXcd::Ones(1);
            }
            std::filesystem::path p = v.get<std::string>();
            if (p.is_relative() && !base_.empty()) p = base_ / p;
            try {
                return load_prototype(p).cast<cd>();
            } catch (const std::exception& e) {
                errors_.push_back(file_key + ": " + e.what());
                return VectorXcd::Ones(1);
            }
        }
        if (!has(key)) {
            errors_.push_back(key + ": missing field");
            return VectorXcd::Ones(1);
        }
        return vector(key);
    }

    CyclicExtension tier(int t) {
        const std::string s = std::to_string(t);
        return {integer("N_zp" + s), integer("N_cp" + s), integer("N_cs" + s), integer("N_zs" + s)};
    }

    FilterStage stage(int s, Index streams) {
        const std::string n = std::to_string(s);
        FilterStage st;
        st.channels = integer("M" + n);
        st.upsampling = integer("L" + n);
        st.downsampling = integer("Q" + n);
        st.circular_period = integer("Nc" + n);
        st.prototype = s == 1 ? filter("h1", "h1_file") : filter("g", "g_file");
        const std::vector<Index> zeros(static_cast<std::size_t>(std::max<Index>(streams, 0)), 0);
        st.time_offsets = indices("o" + n, zeros);
        st.decimation_offsets = indices("a" + n, zeros);
        st.conjugate = flag("b_conj" + n);
        st.causal = flag("b_cas" + n);
        return st;
    }

  private:
    const Json& doc_;
    std::filesystem::path base_;
    std::vector<std::string> errors_;
};

Json encode(cd v) {
    if (v.imag() == 0.0) return v.real();
    return Json::array({v.real(), v.imag()});
}

Json encode(const VectorXcd& v) {
    Json a = Json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(encode(v(i)));
    return a;
}

Json encode(const MatrixXcd& m) {
    Json a = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(encode(m(r, c)));
        a.push_back(std::move(row));
    }
    return a;
}

}  // namespace

ValidatedConfig parse_config(const Json& document, const std::filesystem::path& base_dir) {
    if (!document.is_object()) throw ValidationError({"configuration document must be a JSON object"});

    std::vector<std::string> schema;
    for (const auto& [key, value] : document.items())
        if (!required_fields.contains(key) && !optional_fields.contains(key))
            schema.push_back(key + ": unknown field");
    for (const auto& key : required_fields)
        if (!document.contains(key)) schema.push_back(key + ": missing field");

    Reader rd(document, base_dir);
    ModulatorConfig c;
    c.symbols_per_frame = rd.integer("N", 1);
    c.occupied_subchannels = rd.integer("M_prime", 1);
    c.streams = rd.integer("P", 1);
    c.outputs = rd.integer("K", 1);
    c.commutator = rd.indices("e", {});
    c.tier1 = rd.tier(1);
    c.stage1 = rd.stage(1, c.streams);
    c.tier2 = rd.tier(2);
    if (rd.has("w")) c.window = rd.vector("w");
    if (rd.has("E2")) c.multiplexer = rd.matrix("E2");
    if (rd.has("E3")) c.aux_multiplexer = rd.matrix("E3");
    c.transpose = rd.flag("b_tran");
    c.stage2 = rd.stage(2, c.streams);
    c.tier3 = rd.tier(3);
    if (rd.has("E4")) c.stream_combiner = rd.matrix("E4");

    schema.insert(schema.end(), rd.errors().begin(), rd.errors().end());
    if (!schema.empty()) throw ValidationError(std::move(schema));
    return validate(c);
}

ValidatedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError({"cannot open configuration " + path.string()});
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError({path.string() + ": " + e.what()});
    }
    return parse_config(doc, path.parent_path());
}

Json dump_config(const ModulatorConfig& c) {
    Json j;
    j["N"] = c.symbols_per_frame;
    j["M_prime"] = c.occupied_subchannels;
    j["P"] = c.streams;
    j["K"] = c.outputs;
    j["e"] = c.commutator;
    auto tier = [&](int t, const CyclicExtension& x) {
        const std::string s = std::to_string(t);
        j["N_zp" + s] = x.zero_prefix;
        j["N_cp" + s] = x.cyclic_prefix;
        j["N_cs" + s] = x.cyclic_suffix;
        j["N_zs" + s] = x.zero_suffix;
    };
    auto stage = [&](int s, const FilterStage& st) {
        const std::string n = std::to_string(s);
        j["M" + n] = st.channels;
        j["L" + n] = st.upsampling;
        j["Q" + n] = st.downsampling;
        j[s == 1 ? "h1" : "g"] = encode(st.prototype);
        j["Nc" + n] = st.circular_period;
        j["o" + n] = st.time_offsets;
        j["a" + n] = st.decimation_offsets;
        j["b_conj" + n] = st.conjugate;
        j["b_cas" + n] = st.causal;
    };
    tier(1, c.tier1);
    stage(1, c.stage1);
    tier(2, c.tier2);
    j["w"] = encode(c.window);
    j["b_tran"] = c.transpose;
    j["E2"] = encode(c.multiplexer);
    j["E3"] = encode(c.aux_multiplexer);
    stage(2, c.stage2);
    tier(3, c.tier3);
    j["E4"] = encode(c.stream_combiner);
    return j;
}

std::string format_config(const Json& document) {
    std::ostringstream os;
    os << "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : document.items()) {
        os << "  " << Json(key).dump() << ": " << value.dump();
        os << (++i < document.size() ? ",\n" : "\n");
    }
    os << "}\n";
    return os.str();
}

}  // namespace mcmod
