#include "barytope/polytope_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "barytope/errors.hpp"

namespace bary {

using nlohmann::json;

std::string polytope_to_json(const HPolytope& poly) {
    json j;
    j["name"] = poly.name();
    j["dim"] = poly.dim();
    json rows = json::array();
    for (int i = 0; i < poly.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < poly.dim(); ++k) row.push_back(poly.A()(i, k));
        rows.push_back(std::move(row));
    }
    j["A"] = std::move(rows);
    json b = json::array();
    for (int i = 0; i < poly.rows(); ++i) b.push_back(poly.b()[i]);
    j["b"] = std::move(b);
    return j.dump(2) + "\n";
}

HPolytope polytope_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw input_error(std::string("polytope json: parse failure: ") + e.what());
    }
    if (!j.contains("dim") || !j.contains("A") || !j.contains("b"))
        throw input_error("polytope json: missing one of dim/A/b");
    const int dim = j["dim"].get<int>();
    const auto& ja = j["A"];
    const auto& jb = j["b"];
    if (!ja.is_array() || !jb.is_array() || ja.size() != jb.size())
        throw input_error("polytope json: A and b must be arrays of equal length");
    const int m = static_cast<int>(ja.size());
    Eigen::MatrixXd A(m, dim);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
        const auto& row = ja[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw input_error("polytope json: row " + std::to_string(i) + " has wrong length");
        for (int k = 0; k < dim; ++k) A(i, k) = row[static_cast<std::size_t>(k)].get<double>();
        b[i] = jb[static_cast<std::size_t>(i)].get<double>();
    }
    std::string name = j.contains("name") ? j["name"].get<std::string>() : "unnamed";
    return HPolytope(std::move(name), std::move(A), std::move(b));
}

void write_polytope_file(const HPolytope& poly, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open for writing: " + path);
    out << polytope_to_json(poly);
}

HPolytope read_polytope_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return polytope_from_json(ss.str());
}

} // namespace bary
