#include "randstab/system_io.hpp"

#include "randstab/errors.hpp"
#include "randstab/system.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace randstab {

namespace {

using json = nlohmann::json;

Matrix read_matrix(const json& doc, const char* key, Eigen::Index rows, Eigen::Index cols) {
    const auto it = doc.find(key);
    if (it == doc.end()) throw Error(ErrorCode::InvalidArgument, std::string("missing field ") + key);
    if (!it->is_array() || static_cast<Eigen::Index>(it->size()) != rows) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(key) + " must have " + std::to_string(rows) + " rows");
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = (*it)[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw Error(ErrorCode::DimensionMismatch,
                        std::string(key) + " row " + std::to_string(i) + " must have " +
                            std::to_string(cols) + " entries");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            const json& v = row[static_cast<std::size_t>(j)];
            if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, std::string(key) + " has a non-numeric entry");
            m(i, j) = v.get<double>();
        }
    }
    return m;
}

json write_matrix(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

SystemDescription parse_system_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::IoError, std::string("malformed system JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "system JSON must be an object");
    if (!doc.contains("p") || !doc.contains("r") || !doc["p"].is_number_integer() ||
        !doc["r"].is_number_integer()) {
        throw Error(ErrorCode::InvalidArgument, "system JSON needs integer fields p and r");
    }
    const auto p = doc["p"].get<Eigen::Index>();
    const auto r = doc["r"].get<Eigen::Index>();
    if (p < 1 || r < 1) throw Error(ErrorCode::InvalidArgument, "p and r must be positive");

    DynamicsParameter plant(read_matrix(doc, "A", p, p), read_matrix(doc, "B", p, r));
    Matrix q = doc.contains("Q") ? read_matrix(doc, "Q", p, p) : Matrix::Identity(p, p);
    Matrix rr = doc.contains("R") ? read_matrix(doc, "R", r, r) : Matrix::Identity(r, r);
    return SystemDescription{std::move(plant), CostPair(std::move(q), std::move(rr))};
}

SystemDescription load_system_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open system file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system_json(buf.str());
}

SystemDescription load_system(const std::string& source) {
    if (source == "preset") {
        auto [plant, costs] = preset_benchmark();
        return SystemDescription{std::move(plant), std::move(costs)};
    }
    return load_system_json(source);
}

std::string to_system_json(const SystemDescription& system) {
    json doc;
    doc["p"] = system.plant.state_dim();
    doc["r"] = system.plant.input_dim();
    doc["A"] = write_matrix(system.plant.a());
    doc["B"] = write_matrix(system.plant.b());
    doc["Q"] = write_matrix(system.costs.q());
    doc["R"] = write_matrix(system.costs.r());
    return doc.dump(2);
}

}  // namespace randstab
