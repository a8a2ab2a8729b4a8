#include "crystalfold/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "crystalfold/isometry.hpp"
#include "crystalfold/registry.hpp"

namespace crystalfold {

namespace {

using nlohmann::json;

[[noreturn]] void bad_content(const std::string& path, const std::string& what) {
    throw std::invalid_argument("group file " + path + ": " + what);
}

// "sqrt3" -> sqrt(3); anything else must be an ordinary decimal literal.
double parse_factor(const std::string& text, const std::string& path, const std::string& token) {
    const bool root = text.rfind("sqrt", 0) == 0;
    const std::string digits = root ? text.substr(4) : text;
    size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(digits, &used);
    } catch (const std::exception&) {
        bad_content(path, "cannot parse numeric token \"" + token + "\"");
    }
    if (used != digits.size()) {
        bad_content(path, "trailing characters in numeric token \"" + token + "\"");
    }
    if (root) {
        if (value < 0.0) bad_content(path, "negative radicand in token \"" + token + "\"");
        value = std::sqrt(value);
    }
    return value;
}

// A scalar entry: a JSON number, or an exact string token of the form
// [-]factor[/factor] where factor is a decimal literal or sqrtN.
double numeric_entry(const json& value, const std::string& path) {
    if (value.is_number()) return value.get<double>();
    if (!value.is_string()) {
        bad_content(path, "numeric entries must be numbers or strings, got " +
                              std::string(value.type_name()));
    }
    std::string text = value.get<std::string>();
    const std::string token = text;
    double sign = 1.0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
        sign = text[0] == '-' ? -1.0 : 1.0;
        text.erase(0, 1);
    }
    if (text.empty()) bad_content(path, "empty numeric token");
    const size_t slash = text.find('/');
    const double numerator = parse_factor(text.substr(0, slash), path, token);
    double denominator = 1.0;
    if (slash != std::string::npos) {
        denominator = parse_factor(text.substr(slash + 1), path, token);
        if (denominator == 0.0) bad_content(path, "zero denominator in token \"" + token + "\"");
    }
    return sign * numerator / denominator;
}

Eigen::VectorXd numeric_vector(const json& value, int size, const std::string& path,
                               const std::string& what) {
    if (!value.is_array() || static_cast<int>(value.size()) != size) {
        std::ostringstream msg;
        msg << what << " must be an array of " << size << " entries";
        bad_content(path, msg.str());
    }
    Eigen::VectorXd out(size);
    for (int i = 0; i < size; ++i) out(i) = numeric_entry(value[static_cast<size_t>(i)], path);
    return out;
}

}  // namespace

CrystalGroup load_group_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("group file " + path + ": cannot open for reading");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& err) {
        throw std::runtime_error("group file " + path + ": " + err.what());
    }

    if (!doc.is_object()) bad_content(path, "top level must be an object");
    for (const char* key : {"name", "dimension", "generators", "lattice_basis",
                            "polytope_vertices"}) {
        if (!doc.contains(key)) bad_content(path, std::string("missing field \"") + key + "\"");
    }
    if (!doc["name"].is_string()) bad_content(path, "\"name\" must be a string");
    if (!doc["dimension"].is_number_integer()) bad_content(path, "\"dimension\" must be an integer");
    const int n = doc["dimension"].get<int>();
    if (n < 1 || n > 3) bad_content(path, "\"dimension\" must be 1, 2 or 3");

    std::vector<Isometry> generators;
    if (!doc["generators"].is_array() || doc["generators"].empty()) {
        bad_content(path, "\"generators\" must be a non-empty array");
    }
    for (const json& gen : doc["generators"]) {
        if (!gen.is_object() || !gen.contains("matrix") || !gen.contains("translation")) {
            bad_content(path, "each generator needs \"matrix\" and \"translation\"");
        }
        const Eigen::VectorXd flat = numeric_vector(gen["matrix"], n * n, path, "generator matrix");
        Eigen::MatrixXd matrix(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) matrix(r, c) = flat(r * n + c);
        }
        const Eigen::VectorXd shift =
            numeric_vector(gen["translation"], n, path, "generator translation");
        try {
            generators.push_back(make_isometry(matrix, shift));
        } catch (const std::invalid_argument& err) {
            bad_content(path, err.what());
        }
    }

    if (!doc["lattice_basis"].is_array() || static_cast<int>(doc["lattice_basis"].size()) != n) {
        std::ostringstream msg;
        msg << "\"lattice_basis\" must list " << n << " basis vectors";
        bad_content(path, msg.str());
    }
    Eigen::MatrixXd lattice(n, n);
    for (int c = 0; c < n; ++c) {
        lattice.col(c) =
            numeric_vector(doc["lattice_basis"][static_cast<size_t>(c)], n, path, "lattice vector");
    }

    if (!doc["polytope_vertices"].is_array()) {
        bad_content(path, "\"polytope_vertices\" must be an array of points");
    }
    std::vector<Eigen::VectorXd> vertices;
    for (const json& vertex : doc["polytope_vertices"]) {
        vertices.push_back(numeric_vector(vertex, n, path, "polytope vertex"));
    }

    try {
        ConvexPolytope domain = ConvexPolytope::from_vertices(vertices);
        return make_group(doc["name"].get<std::string>(), std::move(generators), lattice,
                          std::move(domain));
    } catch (const std::invalid_argument& err) {
        bad_content(path, err.what());
    }
}

CrystalGroup resolve_group(const std::string& name_or_path) {
    if (is_builtin_group(name_or_path)) return builtin_group(name_or_path);
    std::error_code ec;
    if (std::filesystem::is_regular_file(name_or_path, ec)) {
        return load_group_file(name_or_path);
    }
    // Not a builtin and not a file: reuse the registry's unknown-name error,
    // which lists every valid builtin name.
    canonical_group_name(name_or_path);
    throw std::logic_error("resolve_group: unreachable");
}

}  // namespace crystalfold
