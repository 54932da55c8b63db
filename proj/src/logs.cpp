#include "magloc/logs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "magloc/errors.hpp"

namespace magloc {

bool PoseRow::valid() const {
    return std::isfinite(y) && std::isfinite(z) && std::isfinite(yaw) && std::isfinite(pitch);
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path + "'");
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim spaces
        std::size_t b = cell.find_first_not_of(" \t\r");
        std::size_t e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
}

double parse_double(const std::string& s, const std::string& path) {
    if (s == "nan" || s == "-nan") return std::nan("");
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw IoError("bad number '" + s + "' in '" + path + "'");
    }
}

constexpr const char* k_channel_header =
    "s0x,s0y,s0z,s1x,s1y,s1z,s2x,s2y,s2z,s3x,s3y,s3z";

}  // namespace

void write_raw_log(const std::string& path, const std::vector<RawSample>& rows) {
    auto out = open_out(path);
    out << "t_s," << k_channel_header << "\n";
    for (const auto& r : rows) {
        out << fmt(r.t);
        for (double v : r.b) out << ',' << fmt(v);
        out << '\n';
    }
}

std::vector<RawSample> read_raw_log(const std::string& path) {
    auto in = open_in(path);
    std::vector<RawSample> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("t_s", 0) == 0) continue;  // header
        }
        const auto cells = split_csv(line);
        if (cells.size() != 13) throw IoError("raw log row needs 13 columns in '" + path + "'");
        RawSample r;
        r.t = parse_double(cells[0], path);
        for (int i = 0; i < 12; ++i) r.b[i] = parse_double(cells[1 + i], path);
        rows.push_back(r);
    }
    return rows;
}

void write_truth_log(const std::string& path, const std::vector<TruthSample>& rows) {
    auto out = open_out(path);
    out << "t_s,y_m,z_m,yaw_rad,pitch_rad,roll_rad\n";
    for (const auto& r : rows)
        out << fmt(r.t) << ',' << fmt(r.y) << ',' << fmt(r.z) << ',' << fmt(r.yaw) << ','
            << fmt(r.pitch) << ',' << fmt(r.roll) << '\n';
}

std::vector<TruthSample> read_truth_log(const std::string& path) {
    auto in = open_in(path);
    std::vector<TruthSample> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("t_s", 0) == 0) continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 6) throw IoError("truth log row needs 6 columns in '" + path + "'");
        rows.push_back({parse_double(cells[0], path), parse_double(cells[1], path),
                        parse_double(cells[2], path), parse_double(cells[3], path),
                        parse_double(cells[4], path), parse_double(cells[5], path)});
    }
    return rows;
}

void write_phasor_log(const std::string& path, const std::vector<PhasorSet>& rows) {
    auto out = open_out(path);
    out << "t_s," << k_channel_header << "\n";
    for (const auto& set : rows) {
        out << fmt(set[0].timestamp);
        for (const auto& r : set) out << ',' << fmt(r.b.x) << ',' << fmt(r.b.y) << ',' << fmt(r.b.z);
        out << '\n';
    }
}

std::vector<PhasorSet> read_phasor_log(const std::string& path) {
    auto in = open_in(path);
    std::vector<PhasorSet> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("t_s", 0) == 0) continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 13) throw IoError("phasor log row needs 13 columns in '" + path + "'");
        PhasorSet set;
        const double t = parse_double(cells[0], path);
        for (int s = 0; s < 4; ++s) {
            set[s].timestamp = t;
            set[s].b = {parse_double(cells[1 + s * 3], path), parse_double(cells[2 + s * 3], path),
                        parse_double(cells[3 + s * 3], path)};
        }
        rows.push_back(set);
    }
    return rows;
}

void write_pose_log(const std::string& path, const std::vector<PoseRow>& rows) {
    auto out = open_out(path);
    out << "t_s,y_m,z_m,yaw_rad,pitch_rad,residual,solver\n";
    for (const auto& r : rows)
        out << fmt(r.t) << ',' << fmt(r.y) << ',' << fmt(r.z) << ',' << fmt(r.yaw) << ','
            << fmt(r.pitch) << ',' << fmt(r.residual) << ',' << r.solver << '\n';
}

std::vector<PoseRow> read_pose_log(const std::string& path) {
    auto in = open_in(path);
    std::vector<PoseRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("t_s", 0) == 0) continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 7) throw IoError("pose log row needs 7 columns in '" + path + "'");
        PoseRow r;
        r.t = parse_double(cells[0], path);
        r.y = parse_double(cells[1], path);
        r.z = parse_double(cells[2], path);
        r.yaw = parse_double(cells[3], path);
        r.pitch = parse_double(cells[4], path);
        r.residual = parse_double(cells[5], path);
        r.solver = cells[6];
        rows.push_back(r);
    }
    return rows;
}

}  // namespace magloc
