#include "oneway/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oneway/errors.hpp"

namespace oneway {

using nlohmann::json;

namespace {

json parse(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw validation_error(std::string(what) + ": not valid JSON");
    return j;
}

int require_int(const json& j, const char* key, const char* what) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw validation_error(std::string(what) + ": missing or non-integer \"" + key + "\"");
    return j[key].get<int>();
}

void flatten_numbers(const json& node, std::vector<double>& out, const char* what) {
    if (node.is_array()) {
        for (const auto& c : node) flatten_numbers(c, out, what);
    } else if (node.is_number()) {
        out.push_back(node.get<double>());
    } else {
        throw validation_error(std::string(what) + ": \"p\" contains a non-numeric entry");
    }
}

} // namespace

std::string function_to_json(const FunctionTable& f) {
    json rows = json::array();
    for (int x = 0; x < f.x_size; ++x) {
        json row = json::array();
        for (int y = 0; y < f.y_size; ++y) row.push_back(f.at(x, y));
        rows.push_back(std::move(row));
    }
    json j{{"x_size", f.x_size}, {"y_size", f.y_size}, {"z_size", f.z_size},
           {"partial", f.partial}, {"values", std::move(rows)}};
    return j.dump();
}

FunctionTable function_from_json(const std::string& text) {
    const json j = parse(text, "function file");
    FunctionTable f;
    f.x_size = require_int(j, "x_size", "function file");
    f.y_size = require_int(j, "y_size", "function file");
    f.z_size = require_int(j, "z_size", "function file");
    if (!j.contains("partial") || !j["partial"].is_boolean())
        throw validation_error("function file: missing or non-boolean \"partial\"");
    f.partial = j["partial"].get<bool>();
    if (!j.contains("values") || !j["values"].is_array())
        throw validation_error("function file: missing \"values\" array");
    const auto& rows = j["values"];
    if (static_cast<int>(rows.size()) != f.x_size)
        throw validation_error("function file: values has " + std::to_string(rows.size()) +
                               " rows, expected " + std::to_string(f.x_size));
    f.values.reserve(static_cast<std::size_t>(f.x_size) * f.y_size);
    for (int x = 0; x < f.x_size; ++x) {
        const auto& row = rows[x];
        if (!row.is_array() || static_cast<int>(row.size()) != f.y_size)
            throw validation_error("function file: values[" + std::to_string(x) +
                                   "] row length differs from y_size");
        for (int y = 0; y < f.y_size; ++y) {
            if (!row[y].is_number_integer())
                throw validation_error("function file: values[" + std::to_string(x) + "][" +
                                       std::to_string(y) + "] is not an integer");
            f.values.push_back(row[y].get<int>());
        }
    }
    f.validate();
    return f;
}

std::string distribution_to_json(const JointDistribution& d) {
    json rows = json::array();
    for (int x = 0; x < d.x_size; ++x) {
        json row = json::array();
        for (int y = 0; y < d.y_size; ++y) row.push_back(d.at(x, y));
        rows.push_back(std::move(row));
    }
    json j{{"x_size", d.x_size}, {"y_size", d.y_size}, {"p", std::move(rows)}};
    return j.dump();
}

JointDistribution distribution_from_json(const std::string& text) {
    const json j = parse(text, "distribution file");
    JointDistribution d;
    d.x_size = require_int(j, "x_size", "distribution file");
    d.y_size = require_int(j, "y_size", "distribution file");
    if (!j.contains("p") || !j["p"].is_array())
        throw validation_error("distribution file: missing \"p\" array");
    const auto& rows = j["p"];
    if (static_cast<int>(rows.size()) != d.x_size)
        throw validation_error("distribution file: p has " + std::to_string(rows.size()) +
                               " rows, expected " + std::to_string(d.x_size));
    d.p.reserve(static_cast<std::size_t>(d.x_size) * d.y_size);
    for (int x = 0; x < d.x_size; ++x) {
        const auto& row = rows[x];
        if (!row.is_array() || static_cast<int>(row.size()) != d.y_size)
            throw validation_error("distribution file: p[" + std::to_string(x) +
                                   "] row length differs from y_size");
        for (int y = 0; y < d.y_size; ++y) {
            if (!row[y].is_number())
                throw validation_error("distribution file: p[" + std::to_string(x) + "][" +
                                       std::to_string(y) + "] is not a number");
            d.p.push_back(row[y].get<double>());
        }
    }
    d.validate();
    return d;
}

std::string labeled_joint_to_json(const LabeledJoint& j) {
    json out{{"axes", j.axes}, {"p", j.probs}};
    return out.dump();
}

LabeledJoint labeled_joint_from_json(const std::string& text) {
    const json j = parse(text, "labeled joint file");
    if (!j.contains("axes") || !j["axes"].is_array())
        throw validation_error("labeled joint file: missing \"axes\" array");
    std::vector<int> axes;
    for (const auto& a : j["axes"]) {
        if (!a.is_number_integer())
            throw validation_error("labeled joint file: non-integer axis size");
        axes.push_back(a.get<int>());
    }
    if (!j.contains("p"))
        throw validation_error("labeled joint file: missing \"p\"");
    std::vector<double> probs;
    flatten_numbers(j["p"], probs, "labeled joint file");
    LabeledJoint out(std::move(axes), std::move(probs));
    out.validate();
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw validation_error("cannot write file: " + path);
    out << content;
}

void save_function(const FunctionTable& f, const std::string& path) {
    write_text_file(path, function_to_json(f) + "\n");
}

FunctionTable load_function(const std::string& path) {
    return function_from_json(read_text_file(path));
}

void save_distribution(const JointDistribution& d, const std::string& path) {
    write_text_file(path, distribution_to_json(d) + "\n");
}

JointDistribution load_distribution(const std::string& path) {
    return distribution_from_json(read_text_file(path));
}

LabeledJoint load_labeled_joint(const std::string& path) {
    return labeled_joint_from_json(read_text_file(path));
}

} // namespace oneway
