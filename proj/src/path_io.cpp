#include "skolab/path_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace skolab {

using nlohmann::json;

json path_to_json(const StepPath& path) {
    json j;
    j["dim"] = path.dim();
    j["horizon"] = path.horizon();
    j["breakpoints"] = path.breakpoints();
    j["values"] = path.values();
    return j;
}

StepPath path_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("horizon") ||
        !j.contains("breakpoints") || !j.contains("values"))
        fail(ErrorCode::BadParameter, "path JSON needs dim, horizon, breakpoints, values");
    return StepPath(j.at("dim").get<std::size_t>(), j.at("horizon").get<double>(),
                    j.at("breakpoints").get<std::vector<double>>(),
                    j.at("values").get<std::vector<Vec>>());
}

StepPath load_path(const std::string& file) {
    std::ifstream in(file);
    if (!in) fail(ErrorCode::SinkError, "cannot open " + file);
    if (file.size() >= 4 && file.substr(file.size() - 4) == ".csv") {
        std::stringstream ss;
        ss << in.rdbuf();
        return path_from_csv(ss.str());
    }
    json j;
    in >> j;
    return path_from_json(j);
}

void save_path(const StepPath& path, const std::string& file) {
    std::ofstream out(file);
    if (!out) fail(ErrorCode::SinkError, "cannot open " + file);
    if (file.size() >= 4 && file.substr(file.size() - 4) == ".csv") {
        out << path_to_csv(path);
        return;
    }
    out << path_to_json(path).dump(2) << "\n";
}

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string path_to_csv(const StepPath& path) {
    std::ostringstream out;
    out << "t";
    for (std::size_t k = 1; k <= path.dim(); ++k) out << ",v" << k;
    out << "\n";
    for (std::size_t i = 0; i < path.segments(); ++i) {
        out << fmt(path.breakpoints()[i]);
        for (double v : path.values()[i]) out << "," << fmt(v);
        out << "\n";
    }
    if (path.breakpoints().back() < path.horizon()) {
        out << fmt(path.horizon());
        for (double v : path.values().back()) out << "," << fmt(v);
        out << "\n";
    }
    return out.str();
}

StepPath path_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::BadParameter, "empty CSV");
    std::size_t dim = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
    if (dim == 0) fail(ErrorCode::BadParameter, "CSV header must be t,v1..vd");
    std::vector<double> bp;
    std::vector<Vec> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> nums;
        while (std::getline(row, cell, ',')) nums.push_back(std::stod(cell));
        if (nums.size() != dim + 1) fail(ErrorCode::BadParameter, "CSV row width mismatch");
        bp.push_back(nums[0]);
        vals.emplace_back(nums.begin() + 1, nums.end());
    }
    if (bp.empty()) fail(ErrorCode::BadParameter, "CSV has no rows");
    double horizon = bp.back();
    if (bp.size() >= 2 && vals.back() == vals[vals.size() - 2]) {
        bp.pop_back();
        vals.pop_back();
    }
    return StepPath(dim, horizon, std::move(bp), std::move(vals));
}

} // namespace skolab
