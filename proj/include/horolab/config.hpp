#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace horolab {

// Flat key=value experiment configuration.  Values are kept verbatim, so a
// parsed config serializes back to an identical normalized form (sorted keys,
// one pair per line).
class ExperimentConfig {
public:
    static ExperimentConfig from_string(const std::string& text);
    static ExperimentConfig from_file(const std::string& path);

    void set_pair(const std::string& pair);  // "key=value"
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const;
    double get_num(const std::string& key, double fallback) const;
    uint64_t get_int(const std::string& key, uint64_t fallback) const;

    std::string normalized() const;
    // normalized form on a single line (CSV header payload); skip_key drops
    // one key (the output path, which is not part of the parameter set)
    std::string oneline(const std::string& skip_key = "") const;

private:
    std::map<std::string, std::string> kv_;
};

} // namespace horolab
