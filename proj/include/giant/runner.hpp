// runner.hpp — Configuration parsing and subcommand orchestration

#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace giant::run {

struct Overrides {
    std::optional<std::filesystem::path> out_dir;
    std::optional<double> dt;
    int threads{0};  // 0 keeps the runtime default
};

struct Outcome {
    int exit_code{0};          // 0 success, 2 configuration error, 1 anything else
    nlohmann::ordered_json error;  // machine-readable record, null on success
    std::filesystem::path out_dir;
};

inline constexpr const char* subcommands[] = {"simulate", "design", "floquet-check", "interactions", "spectral-density"};

// Parses `config_text` strictly and runs one subcommand. Relative file
// references in the config resolve against `base_dir`. Never throws.
Outcome run_command(std::string_view subcommand, std::string_view config_text, const std::filesystem::path& base_dir,
                    const Overrides& overrides);

Outcome run_file(std::string_view subcommand, const std::filesystem::path& config_path, const Overrides& overrides);

// Reads one G(k) sample per line as "re,im" (optional header and '#' comments).
std::vector<std::complex<double>> read_gk_csv(const std::filesystem::path& path, std::size_t expected);

} // namespace giant::run
