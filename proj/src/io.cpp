#include "chanmom/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace chanmom {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_whole_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

double require_number(const json& meta, const char* key,
                      const std::filesystem::path& path) {
    if (!meta.contains(key)) {
        throw ValidationError("profile file " + path.string() +
                              ": missing metadata key '" + key + "'");
    }
    if (!meta[key].is_number()) {
        throw ValidationError("profile file " + path.string() +
                              ": metadata key '" + key + "' is not a number");
    }
    return meta[key].get<double>();
}

std::string require_string(const json& meta, const char* key,
                           const std::filesystem::path& path) {
    if (!meta.contains(key)) {
        throw ValidationError("profile file " + path.string() +
                              ": missing metadata key '" + key + "'");
    }
    if (!meta[key].is_string()) {
        throw ValidationError("profile file " + path.string() +
                              ": metadata key '" + key + "' is not a string");
    }
    return meta[key].get<std::string>();
}

constexpr const char* kSentinel = "---";
constexpr const char* kCsvHeader = "x2_over_h,value";

} // namespace

MomentProfile read_profile_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open profile file " + path.string());
    }

    std::string line;
    std::string header_text;
    bool found_sentinel = false;
    while (std::getline(in, line)) {
        if (line == kSentinel) {
            found_sentinel = true;
            break;
        }
        header_text += line;
        header_text += '\n';
    }
    if (!found_sentinel) {
        throw ValidationError("profile file " + path.string() +
                              ": missing '---' sentinel after metadata");
    }

    json meta;
    try {
        meta = json::parse(header_text);
    } catch (const json::parse_error& e) {
        throw ValidationError("profile file " + path.string() +
                              ": bad metadata JSON: " + e.what());
    }

    const double re_tau = require_number(meta, "re_tau", path);
    const double pr = require_number(meta, "pr", path);
    const double u_tau = require_number(meta, "u_tau", path);
    const double theta_tau = require_number(meta, "theta_tau", path);
    const double h = require_number(meta, "h", path);
    const int n = static_cast<int>(require_number(meta, "n", path));
    const int m = static_cast<int>(require_number(meta, "m", path));
    const std::string basis_name = require_string(meta, "basis", path);
    const std::string origin = require_string(meta, "origin", path);
    if (origin != "center" && origin != "wall") {
        throw ValidationError("profile file " + path.string() +
                              ": origin must be 'center' or 'wall', got '" +
                              origin + "'");
    }

    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ValidationError("profile file " + path.string() +
                              ": expected CSV header '" +
                              std::string(kCsvHeader) + "'");
    }

    std::vector<double> xs, values;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ValidationError("profile file " + path.string() + ": row " +
                                  std::to_string(row) +
                                  " is not 'x2_over_h,value'");
        }
        try {
            std::size_t used = 0;
            const std::string xs_text = line.substr(0, comma);
            const std::string vs_text = line.substr(comma + 1);
            const double x = std::stod(xs_text, &used);
            if (used != xs_text.size()) throw std::invalid_argument(xs_text);
            const double v = std::stod(vs_text, &used);
            if (used != vs_text.size()) throw std::invalid_argument(vs_text);
            xs.push_back(x);
            values.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError("profile file " + path.string() + ": row " +
                                  std::to_string(row) +
                                  " has a malformed number");
        }
    }

    if (origin == "wall") {
        // wall-anchored x2/h counts from the wall; flip to centre-anchored
        for (double& x : xs) x = 1.0 - x;
        std::reverse(xs.begin(), xs.end());
        std::reverse(values.begin(), values.end());
    }

    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i] == xs[i - 1]) {
            throw ValidationError("profile file " + path.string() +
                                  ": duplicate x2_over_h value " +
                                  format_double(xs[i]));
        }
        if (xs[i] < xs[i - 1]) {
            throw ValidationError("profile file " + path.string() +
                                  ": non-monotone grid at row " +
                                  std::to_string(i + 1));
        }
    }

    MomentProfile profile = make_profile(
        make_moment_order(n, m), WallNormalGrid(std::move(xs)),
        std::move(values), moment_basis_from_string(basis_name),
        make_flow_case(re_tau, pr, u_tau, theta_tau, h));
    if (meta.contains("centerline")) {
        profile.centerline = meta["centerline"].get<double>();
    }
    return profile;
}

void write_profile_file(const MomentProfile& profile,
                        const std::filesystem::path& path,
                        const nlohmann::json& extra_metadata) {
    json meta;
    meta["schema"] = "chanmom-profile";
    meta["version"] = 1;
    meta["re_tau"] = profile.flow_case.re_tau;
    meta["pr"] = profile.flow_case.pr;
    meta["u_tau"] = profile.flow_case.u_tau;
    meta["theta_tau"] = profile.flow_case.theta_tau;
    meta["h"] = profile.flow_case.h;
    meta["n"] = profile.order.n;
    meta["m"] = profile.order.m;
    meta["basis"] = to_string(profile.basis);
    meta["origin"] = "center";
    if (profile.centerline) {
        meta["centerline"] = *profile.centerline;
    }
    if (!extra_metadata.is_null() && !extra_metadata.empty()) {
        for (auto it = extra_metadata.begin(); it != extra_metadata.end(); ++it) {
            meta[it.key()] = it.value();
        }
    }

    std::ostringstream out;
    out << meta.dump(2) << '\n' << kSentinel << '\n' << kCsvHeader << '\n';
    for (std::size_t i = 0; i < profile.grid.size(); ++i) {
        out << format_double(profile.grid[i]) << ','
            << format_double(profile.values[i]) << '\n';
    }
    atomic_write(path, out.str());
}

namespace {

constexpr char kSnapshotMagic[8] = {'C', 'H', 'M', 'O', 'M', 'S', 'N', '1'};
constexpr std::uint32_t kSnapshotVersion = 1;

void append_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void append_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

class ByteReader {
public:
    ByteReader(const std::string& data, const std::filesystem::path& path)
        : data_(data), path_(path) {}

    std::size_t offset() const { return offset_; }

    void skip(std::size_t bytes) { offset_ += bytes; }

    void require(std::size_t bytes, const char* what) {
        if (offset_ + bytes > data_.size()) {
            throw ValidationError(
                "snapshot file " + path_.string() + ": truncated while reading " +
                what + " (need " + std::to_string(offset_ + bytes) +
                " bytes, file has " + std::to_string(data_.size()) + ")");
        }
    }

    std::uint32_t read_u32(const char* what) {
        require(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(
                     static_cast<unsigned char>(data_[offset_ + i]))
                 << (8 * i);
        }
        offset_ += 4;
        return v;
    }

    double read_f64(const char* what) {
        require(8, what);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) {
            bits |= static_cast<std::uint64_t>(
                        static_cast<unsigned char>(data_[offset_ + i]))
                    << (8 * i);
        }
        offset_ += 8;
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }

    void read_f64_array(std::vector<double>& out, std::size_t count,
                        const char* what) {
        require(8 * count, what);
        out.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = read_f64(what);
        }
    }

private:
    const std::string& data_;
    const std::filesystem::path& path_;
    std::size_t offset_ = 0;
};

} // namespace

SnapshotEnsemble read_snapshot_file(const std::filesystem::path& path) {
    const std::string data = read_whole_file(path);
    ByteReader reader(data, path);

    reader.require(sizeof(kSnapshotMagic), "magic");
    if (std::memcmp(data.data(), kSnapshotMagic, sizeof(kSnapshotMagic)) != 0) {
        throw ValidationError("snapshot file " + path.string() +
                              ": bad magic at byte offset 0");
    }
    reader.skip(sizeof(kSnapshotMagic));

    const std::uint32_t version = reader.read_u32("version");
    if (version != kSnapshotVersion) {
        throw ValidationError("snapshot file " + path.string() +
                              ": unsupported version " +
                              std::to_string(version) + " at byte offset 8");
    }

    SnapshotShape shape;
    shape.n1 = reader.read_u32("n1");
    shape.n2 = reader.read_u32("n2");
    shape.n3 = reader.read_u32("n3");
    const std::uint32_t n_snapshots = reader.read_u32("n_snapshots");
    if (shape.n1 == 0 || shape.n2 == 0 || shape.n3 == 0 || n_snapshots == 0) {
        throw ValidationError("snapshot file " + path.string() +
                              ": zero extent in shape header");
    }

    const double re_tau = reader.read_f64("re_tau");
    const double pr = reader.read_f64("pr");
    const double u_tau = reader.read_f64("u_tau");
    const double theta_tau = reader.read_f64("theta_tau");
    const double h = reader.read_f64("h");

    std::vector<double> grid_points;
    reader.read_f64_array(grid_points, shape.n2, "grid");

    std::vector<SnapshotFields> snapshots(n_snapshots);
    for (std::uint32_t s = 0; s < n_snapshots; ++s) {
        reader.read_f64_array(snapshots[s].u1, shape.field_size(), "U1 field");
        reader.read_f64_array(snapshots[s].theta, shape.field_size(),
                              "Theta field");
    }
    if (reader.offset() != data.size()) {
        throw ValidationError("snapshot file " + path.string() + ": " +
                              std::to_string(data.size() - reader.offset()) +
                              " trailing bytes after byte offset " +
                              std::to_string(reader.offset()));
    }

    return SnapshotEnsemble(shape, std::move(snapshots),
                            WallNormalGrid(std::move(grid_points)),
                            make_flow_case(re_tau, pr, u_tau, theta_tau, h));
}

void write_snapshot_file(const SnapshotEnsemble& ensemble,
                         const std::filesystem::path& path) {
    const auto& shape = ensemble.shape();
    std::string out;
    out.reserve(68 + 8 * shape.n2 +
                16 * shape.field_size() * ensemble.snapshots().size());
    out.append(kSnapshotMagic, sizeof(kSnapshotMagic));
    append_u32(out, kSnapshotVersion);
    append_u32(out, static_cast<std::uint32_t>(shape.n1));
    append_u32(out, static_cast<std::uint32_t>(shape.n2));
    append_u32(out, static_cast<std::uint32_t>(shape.n3));
    append_u32(out, static_cast<std::uint32_t>(ensemble.snapshots().size()));
    append_f64(out, ensemble.flow_case().re_tau);
    append_f64(out, ensemble.flow_case().pr);
    append_f64(out, ensemble.flow_case().u_tau);
    append_f64(out, ensemble.flow_case().theta_tau);
    append_f64(out, ensemble.flow_case().h);
    for (double x : ensemble.grid().points()) append_f64(out, x);
    for (const auto& snap : ensemble.snapshots()) {
        for (double v : snap.u1) append_f64(out, v);
        for (double v : snap.theta) append_f64(out, v);
    }
    atomic_write(path, out);
}

CaseRegistry CaseRegistry::bundled() {
    CaseRegistry registry;
    for (double re : reynolds_values()) {
        for (double pr : prandtl_values()) {
            bool available = true;
            if (re == 5000.0 && pr != 0.71) available = false;
            if (pr == 10.0 && re != 500.0) available = false;
            registry.entries_.push_back({re, pr, available});
        }
    }
    return registry;
}

bool CaseRegistry::available(double re_tau, double pr) const {
    for (const auto& e : entries_) {
        if (e.re_tau == re_tau && e.pr == pr) return e.available;
    }
    return false;
}

std::size_t CaseRegistry::available_count() const {
    std::size_t count = 0;
    for (const auto& e : entries_) {
        if (e.available) ++count;
    }
    return count;
}

const std::vector<double>& CaseRegistry::reynolds_values() {
    static const std::vector<double> values{500.0, 1000.0, 2000.0, 5000.0};
    return values;
}

const std::vector<double>& CaseRegistry::prandtl_values() {
    static const std::vector<double> values{0.007, 0.01, 0.02, 0.05, 0.1,
                                            0.3,   0.5,  0.71, 1.0,  2.0,
                                            4.0,   7.0,  10.0};
    return values;
}

nlohmann::json CaseRegistry::to_json() const {
    json out = json::array();
    for (const auto& e : entries_) {
        out.push_back({{"re_tau", e.re_tau},
                       {"pr", e.pr},
                       {"available", e.available}});
    }
    return out;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash));
    return buf;
}

std::string fnv1a_hex_file(const std::filesystem::path& path) {
    return fnv1a_hex(read_whole_file(path));
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ValidationError("cannot open " + tmp.string() +
                                  " for writing");
        }
        out.write(contents.data(),
                  static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw ValidationError("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace chanmom
