#include "talbot/manifest.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "talbot/error.hpp"

namespace talbot {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw UsageError("manifest key '" + key + "': '" + text + "' is not a number");
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Manifest Manifest::parse(std::string_view text) {
    Manifest m;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError("manifest line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty()) throw UsageError("manifest line " + std::to_string(lineno) + ": empty key");
        m.entries_[key] = trim(std::string_view(t).substr(eq + 1));
    }
    return m;
}

Manifest Manifest::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read manifest '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string Manifest::serialize() const {
    std::ostringstream out;
    out << "# talbot run manifest\n";
    for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
    return out.str();
}

void Manifest::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest '" + path.string() + "'");
    out << serialize();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void Manifest::set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
void Manifest::set(const std::string& key, double value) { entries_[key] = format_double(value); }
void Manifest::set(const std::string& key, long long value) { entries_[key] = std::to_string(value); }

void Manifest::set_list(const std::string& key, const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ", ";
        s += format_double(values[i]);
    }
    entries_[key] = s;
}

std::string Manifest::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw UsageError("manifest is missing key '" + key + "'");
    return it->second;
}

std::string Manifest::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double Manifest::get_double(const std::string& key) const { return parse_double(key, get_string(key)); }

double Manifest::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long Manifest::get_int(const std::string& key) const {
    const std::string s = get_string(key);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw UsageError("manifest key '" + key + "': '" + s + "' is not an integer");
    return v;
}

long long Manifest::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::vector<double> Manifest::get_list(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(get_string(key));
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) out.push_back(parse_double(key, t));
    }
    return out;
}

PhysicalConfig physical_config(const Manifest& m) {
    return PhysicalConfig(m.get_double("d"), m.get_double("lambda"), m.get_double("l"), m.get_double("A", 1.0));
}

void store_physical_config(Manifest& m, const PhysicalConfig& cfg) {
    m.set("d", cfg.d());
    m.set("lambda", cfg.lambda());
    m.set("l", cfg.l());
    m.set("A", cfg.A());
}

Grating grating_from_manifest(const Manifest& m, const PhysicalConfig& cfg, int N) {
    switch (grating_kind_from_string(m.get_string("grating.kind", "ronchi"))) {
        case GratingKind::Ronchi: return Grating::ronchi(cfg, N);
        case GratingKind::DiracComb: return Grating::dirac_comb(cfg.A(), N);
        case GratingKind::Custom: {
            if (!m.has("grating.coeffs[]")) throw UsageError("custom grating needs 'grating.coeffs[]'");
            return Grating::custom(m.get_list("grating.coeffs[]")).truncated(N);
        }
    }
    throw UsageError("unknown grating kind");
}

}  // namespace talbot
