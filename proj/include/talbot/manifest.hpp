// Run manifest: a flat key = value text file that fully determines a run.
//
//   # comment
//   command = carpet
//   d = 1
//   lambda = 0.05
//   grating.kind = custom
//   grating.coeffs[] = 1, 0.5, 0.25
//
// Keys are kept sorted so serialization is canonical; doubles are written
// with 17 significant digits and therefore round-trip exactly.

#ifndef TALBOT_MANIFEST_HPP
#define TALBOT_MANIFEST_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "talbot/grating.hpp"

namespace talbot {

class Manifest {
public:
    static Manifest parse(std::string_view text);
    static Manifest load(const std::filesystem::path& path);

    std::string serialize() const;
    void save(const std::filesystem::path& path) const;

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    void set(const std::string& key, std::string value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);
    void set(const std::string& key, int value) { set(key, static_cast<long long>(value)); }
    void set_list(const std::string& key, const std::vector<double>& values);

    /// Sets key only when it is absent.
    template <class T>
    void set_default(const std::string& key, const T& value) {
        if (!has(key)) set(key, value);
    }

    /// Typed reads; throw UsageError naming the key on a malformed value and
    /// when a key without fallback is missing.
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::vector<double> get_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

/// d, lambda, l, A.
PhysicalConfig physical_config(const Manifest& m);
void store_physical_config(Manifest& m, const PhysicalConfig& cfg);

/// grating.kind (ronchi | dirac | custom) truncated at N; custom gratings
/// read grating.coeffs[].
Grating grating_from_manifest(const Manifest& m, const PhysicalConfig& cfg, int N);

std::string format_double(double v);

}  // namespace talbot

#endif
