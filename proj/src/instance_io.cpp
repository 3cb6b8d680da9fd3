#include "rankbench/instance_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <vector>

namespace rankbench {

namespace {

using nlohmann::json;

std::size_t size_field(const json& doc, const char* name) {
    if (!doc.contains(name)) throw InvalidInstance(std::string("missing field \"") + name + "\"");
    const json& v = doc.at(name);
    if (!v.is_number_unsigned()) {
        throw InvalidInstance(std::string("field \"") + name + "\" must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

std::vector<double> number_array(const json& doc, const char* name) {
    const json& v = doc.at(name);
    if (!v.is_array()) throw InvalidInstance(std::string("field \"") + name + "\" must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
            throw InvalidInstance(std::string("field \"") + name + "[" + std::to_string(i) + "]\" must be a number");
        }
        out.push_back(v[i].get<double>());
    }
    return out;
}

}  // namespace

InstanceFile parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInstance(std::string("instance JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidInstance("instance document must be a JSON object");

    const std::size_t k = size_field(doc, "k");
    const std::size_t l = size_field(doc, "l");
    const bool has_theta = doc.contains("theta");
    const bool has_mu = doc.contains("mu");
    if (has_theta == has_mu) throw InvalidInstance("exactly one of \"theta\" or \"mu\" is required");

    std::vector<double> values = number_array(doc, has_theta ? "theta" : "mu");
    if (doc.contains("n") && size_field(doc, "n") != values.size()) {
        throw InvalidInstance("field \"n\" (" + std::to_string(size_field(doc, "n")) + ") differs from array length (" +
                              std::to_string(values.size()) + ")");
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[i - 1]) {
            throw InvalidInstance(std::string("field \"") + (has_theta ? "theta" : "mu") +
                                  "\" is not sorted descending at index " + std::to_string(i));
        }
    }

    std::optional<std::uint64_t> seed;
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) throw InvalidInstance("field \"seed\" must be a uint64");
        seed = doc.at("seed").get<std::uint64_t>();
    }
    if (has_theta) return {Instance(std::move(values), k, l), seed};
    return {Instance::from_utilities(values, k, l), seed};
}

InstanceFile read_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_instance(buffer.str());
    } catch (const InvalidInstance& e) {
        throw InvalidInstance(path.string() + ": " + e.what());
    }
}

std::string dump_instance(const Instance& instance, std::optional<std::uint64_t> seed) {
    json doc;
    doc["n"] = instance.n();
    doc["k"] = instance.k();
    doc["l"] = instance.l();
    doc["theta"] = std::vector<double>(instance.theta().begin(), instance.theta().end());
    if (seed) doc["seed"] = *seed;
    return doc.dump(2) + "\n";
}

void write_instance(const std::filesystem::path& path, const Instance& instance, std::optional<std::uint64_t> seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file " + path.string());
    out << dump_instance(instance, seed);
}

}  // namespace rankbench
