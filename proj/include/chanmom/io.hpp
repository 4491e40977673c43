#ifndef CHANMOM_IO_HPP
#define CHANMOM_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "chanmom/moments.hpp"
#include "chanmom/types.hpp"

namespace chanmom {

/// Profile file format: a JSON metadata header, a sentinel line "---", then
/// a CSV body "x2_over_h,value". Wall-anchored inputs (origin: "wall") are
/// flipped to the centre-anchored convention on read. Doubles are written
/// with 17 significant digits, so write/read round trips are bit-exact.
MomentProfile read_profile_file(const std::filesystem::path& path);

void write_profile_file(const MomentProfile& profile,
                        const std::filesystem::path& path,
                        const nlohmann::json& extra_metadata = nlohmann::json());

/// Snapshot container: magic "CHMOMSN1", u32 version, little-endian u32
/// shape header (n1, n2, n3, n_snapshots), 5 x f64 case parameters, f64
/// grid[n2], then per snapshot the U1 and Theta fields as IEEE-754 f64 in
/// plane-major order. Round trips are byte-exact.
SnapshotEnsemble read_snapshot_file(const std::filesystem::path& path);

void write_snapshot_file(const SnapshotEnsemble& ensemble,
                         const std::filesystem::path& path);

struct RegistryEntry {
    double re_tau = 0.0;
    double pr = 0.0;
    bool available = false;
};

/// The (Re_tau, Pr) case grid of the validation study. Re_tau = 5000 is
/// available only with Pr = 0.71, and Pr = 10 only with Re_tau = 500.
class CaseRegistry {
public:
    static CaseRegistry bundled();

    const std::vector<RegistryEntry>& entries() const { return entries_; }
    bool available(double re_tau, double pr) const;
    std::size_t available_count() const;

    static const std::vector<double>& reynolds_values();
    static const std::vector<double>& prandtl_values();

    nlohmann::json to_json() const;

private:
    std::vector<RegistryEntry> entries_;
};

/// FNV-1a 64-bit content hash, hex-encoded; used for report provenance.
std::string fnv1a_hex(const std::string& bytes);
std::string fnv1a_hex_file(const std::filesystem::path& path);

/// Write-then-rename so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path,
                  const std::string& contents);

} // namespace chanmom

#endif // CHANMOM_IO_HPP
