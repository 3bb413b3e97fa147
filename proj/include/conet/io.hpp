#pragma once
// File formats: network directories (edges.tsv / nodes.tsv / meta.json),
// GraphML export, key=value config files, and the run manifest.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "conet/common.hpp"
#include "conet/community.hpp"
#include "conet/network.hpp"

namespace conet {

namespace fs = std::filesystem;

// All serialized weights carry 12 significant digits.
inline std::string fmt_weight(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

using LabelMap = std::map<std::string, std::string>;  // code -> human-readable label

// labels.tsv sidecar: code <TAB> label
inline LabelMap read_labels(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open labels file: " + path.string());
    LabelMap labels;
    std::string line;
    while (std::getline(in, line)) {
        const auto sv = trim(std::string_view(line));
        if (sv.empty() || sv.front() == '#') continue;
        const auto fields = split(sv, '\t');
        if (fields.size() >= 2) labels[std::string(trim(fields[0]))] = std::string(trim(fields[1]));
    }
    return labels;
}

// Writes edges.tsv (code_i, code_j, w_ij; positive pairs only), nodes.tsv
// (code, label, strength) and meta.json; rows sorted lexicographically for
// byte-stable diffs.
inline void write_network_dir(const WeightedNetwork& net, const fs::path& dir,
                              const LabelMap& labels = {}) {
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "edges.tsv");
        if (!out) throw DataError("cannot write " + (dir / "edges.tsv").string());
        out << "code_i\tcode_j\tweight\n";
        std::vector<std::pair<std::pair<std::string, std::string>, double>> rows;
        for (const auto& e : net.edges()) {
            std::string a = net.nodes()[e.i], b = net.nodes()[e.j];
            if (b < a) std::swap(a, b);
            rows.push_back({{a, b}, e.weight});
        }
        std::sort(rows.begin(), rows.end());
        for (const auto& [key, w] : rows)
            out << key.first << '\t' << key.second << '\t' << fmt_weight(w) << '\n';
    }
    {
        std::ofstream out(dir / "nodes.tsv");
        if (!out) throw DataError("cannot write " + (dir / "nodes.tsv").string());
        out << "code\tlabel\tstrength\n";
        std::vector<std::string> codes = net.nodes();
        std::sort(codes.begin(), codes.end());
        for (const auto& code : codes) {
            const auto lit = labels.find(code);
            out << code << '\t' << (lit == labels.end() ? "" : lit->second) << '\t'
                << fmt_weight(net.strength(net.index_of(code))) << '\n';
        }
    }
    {
        nlohmann::ordered_json meta;
        meta["tier"] = net.meta().tier;
        meta["year"] = net.meta().year;
        meta["doc_count"] = net.meta().doc_count;
        meta["node_count"] = net.size();
        meta["node_order"] = net.nodes();
        meta["zero_frequency_nodes"] = net.meta().zero_frequency_nodes;
        std::ofstream out(dir / "meta.json");
        out << meta.dump(2) << '\n';
    }
}

inline WeightedNetwork read_network_dir(const fs::path& dir) {
    NetworkMeta meta;
    std::vector<std::string> nodes;
    {
        std::ifstream in(dir / "meta.json");
        if (!in) throw DataError("cannot open " + (dir / "meta.json").string());
        nlohmann::json j;
        in >> j;
        meta.tier = j.value("tier", "");
        meta.year = j.value("year", 0);
        meta.doc_count = j.value("doc_count", std::size_t{0});
        nodes = j.at("node_order").get<std::vector<std::string>>();
        if (j.contains("zero_frequency_nodes"))
            meta.zero_frequency_nodes = j["zero_frequency_nodes"].get<std::vector<std::string>>();
    }
    WeightedNetwork net(nodes, meta);
    std::ifstream in(dir / "edges.tsv");
    if (!in) throw DataError("cannot open " + (dir / "edges.tsv").string());
    std::string line;
    std::getline(in, line);  // header
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto sv = trim(std::string_view(line));
        if (sv.empty()) continue;
        const auto fields = split(sv, '\t');
        if (fields.size() != 3)
            throw DataError("edges.tsv line " + std::to_string(lineno) + ": expected 3 fields");
        net.set_weight(net.index_of(std::string(fields[0])), net.index_of(std::string(fields[1])),
                       std::stod(std::string(fields[2])));
    }
    return net;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// GraphML with label, strength and (optionally) community id attributes,
// stable-sorted for deterministic output.
inline void write_graphml(const WeightedNetwork& net, const fs::path& path,
                          const Partition* partition = nullptr, const LabelMap& labels = {}) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
        << "  <key id=\"strength\" for=\"node\" attr.name=\"strength\" attr.type=\"double\"/>\n"
        << "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
        << "  <graph edgedefault=\"undirected\">\n";
    std::vector<std::size_t> order(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return net.nodes()[a] < net.nodes()[b]; });
    for (std::size_t i : order) {
        const auto& code = net.nodes()[i];
        out << "    <node id=\"" << xml_escape(code) << "\">\n";
        const auto lit = labels.find(code);
        if (lit != labels.end())
            out << "      <data key=\"label\">" << xml_escape(lit->second) << "</data>\n";
        out << "      <data key=\"strength\">" << fmt_weight(net.strength(i)) << "</data>\n";
        if (partition)
            out << "      <data key=\"community\">" << partition->community[i] << "</data>\n";
        out << "    </node>\n";
    }
    std::vector<std::pair<std::pair<std::string, std::string>, double>> rows;
    for (const auto& e : net.edges()) {
        std::string a = net.nodes()[e.i], b = net.nodes()[e.j];
        if (b < a) std::swap(a, b);
        rows.push_back({{a, b}, e.weight});
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [key, w] : rows)
        out << "    <edge source=\"" << xml_escape(key.first) << "\" target=\""
            << xml_escape(key.second) << "\"><data key=\"weight\">" << fmt_weight(w)
            << "</data></edge>\n";
    out << "  </graph>\n</graphml>\n";
}

// partition.tsv: code <TAB> community id
inline void write_partition(const WeightedNetwork& net, const Partition& p, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "code\tcommunity\n";
    std::vector<std::size_t> order(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return net.nodes()[a] < net.nodes()[b]; });
    for (std::size_t i : order) out << net.nodes()[i] << '\t' << p.community[i] << '\n';
}

// Plain-text configuration: [section] headers, key=value lines, '#' comments.
class Config {
public:
    static Config from_file(const fs::path& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path.string());
        return from_stream(in);
    }

    static Config from_stream(std::istream& in) {
        Config cfg;
        std::string line, section;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto sv = trim(std::string_view(line));
            if (sv.empty() || sv.front() == '#') continue;
            if (sv.front() == '[') {
                if (sv.back() != ']')
                    throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
                section = std::string(trim(sv.substr(1, sv.size() - 2)));
                continue;
            }
            const auto eq = sv.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
            cfg.values_[section + "." + std::string(trim(sv.substr(0, eq)))] =
                std::string(trim(sv.substr(eq + 1)));
        }
        return cfg;
    }

    std::optional<std::string> get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        return get(key).value_or(fallback);
    }

    std::string require(const std::string& key) const {
        auto v = get(key);
        if (!v) throw ConfigError("missing config key: " + key);
        return *v;
    }

    double get_double(const std::string& key, double fallback) const {
        auto v = get(key);
        return v ? std::stod(*v) : fallback;
    }

    long get_int(const std::string& key, long fallback) const {
        auto v = get(key);
        return v ? std::stol(*v) : fallback;
    }

    // stable content hash over sorted key=value pairs
    std::uint64_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const auto& [k, v] : values_) h = fnv1a(v, fnv1a(k, h));
        return h;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::uint64_t file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for digest: " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h = fnv1a(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
    return h;
}

struct RunManifest {
    std::string config_hash;
    std::map<std::string, std::string> input_digests;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> artifacts;  // relative path -> digest
    bool complete = false;
    std::string failure;

    void record(const fs::path& root, const fs::path& file) {
        artifacts[fs::relative(file, root).generic_string()] = hex64(file_digest(file));
    }

    void write(const fs::path& path) const {
        nlohmann::ordered_json j;
        j["config_hash"] = config_hash;
        j["seed"] = seed;
        j["inputs"] = input_digests;
        j["artifacts"] = artifacts;
        j["complete"] = complete;
        if (!failure.empty()) j["failure"] = failure;
        std::ofstream out(path);
        if (!out) throw DataError("cannot write " + path.string());
        out << j.dump(2) << '\n';
    }
};

}  // namespace conet
