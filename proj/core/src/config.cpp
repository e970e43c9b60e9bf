#include "bladeprog/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

#include "bladeprog/errors.hpp"

namespace bladeprog {

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    return text;
}

double to_double(std::string_view value, std::size_t line_number) {
    double parsed = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
        throw ValidationError("config line " + std::to_string(line_number) +
                              ": cannot parse number '" + std::string(value) + "'");
    }
    return parsed;
}

std::uint64_t to_u64(std::string_view value, std::size_t line_number) {
    std::uint64_t parsed = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
        throw ValidationError("config line " + std::to_string(line_number) +
                              ": cannot parse integer '" + std::string(value) + "'");
    }
    return parsed;
}

std::vector<double> to_double_list(std::string_view value, std::size_t line_number) {
    std::vector<double> list;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string_view item =
            trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                     : comma - start));
        if (!item.empty()) list.push_back(to_double(item, line_number));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (list.empty()) {
        throw ValidationError("config line " + std::to_string(line_number) + ": empty list");
    }
    return list;
}

void require_positive(double value, const char* key) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw ValidationError(std::string("config: ") + key + " must be > 0, got " +
                              std::to_string(value));
    }
}

}  // namespace

ToolConfig ToolConfig::load(std::istream& in) {
    ToolConfig config;
    std::string raw;
    std::size_t line_number = 0;
    while (std::getline(in, raw)) {
        ++line_number;
        std::string_view line(raw);
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("config line " + std::to_string(line_number) +
                                  ": expected 'key = value'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "rho") config.rho = to_double(value, line_number);
        else if (key == "cp") config.cp = to_double(value, line_number);
        else if (key == "sigma_ult") config.sigma_ult = to_double(value, line_number);
        else if (key == "sn_a") config.sn_a = to_double(value, line_number);
        else if (key == "sn_b") config.sn_b = to_double(value, line_number);
        else if (key == "sn_m") config.sn_m = to_double(value, line_number);
        else if (key == "damage_B") config.damage_b = to_double(value, line_number);
        else if (key == "damage_A") config.damage_a = to_double(value, line_number);
        else if (key == "damage_p") config.damage_p = to_double(value, line_number);
        else if (key == "damage_q") config.damage_q = to_double(value, line_number);
        else if (key == "v_ref") config.v_ref = to_double(value, line_number);
        else if (key == "sigma_ref") config.sigma_ref = to_double(value, line_number);
        else if (key == "rotor_rpm") config.rotor_rpm = to_double(value, line_number);
        else if (key == "n_bins") config.n_bins = static_cast<int>(to_u64(value, line_number));
        else if (key == "horizon_years") config.horizon_years = to_double(value, line_number);
        else if (key == "grid_step_years") config.grid_step_years = to_double(value, line_number);
        else if (key == "d_cr_list") config.d_cr_list = to_double_list(value, line_number);
        else if (key == "cov_ref") {
            config.cov_ref = to_double(value, line_number);
            config.cov_ref_set = true;
        } else if (key == "u") {
            config.u = to_double(value, line_number);
            config.u_set = true;
        } else if (key == "t_ref_years") config.t_ref_years = to_double(value, line_number);
        else if (key == "seed") config.seed = to_u64(value, line_number);
        else if (key == "n_paths") config.n_paths = to_u64(value, line_number);
        else if (key == "wind_shape") config.wind_shape = to_double(value, line_number);
        else if (key == "wind_scale") config.wind_scale = to_double(value, line_number);
        else if (key == "wind_samples") config.wind_samples = to_u64(value, line_number);
        else {
            throw ValidationError("config line " + std::to_string(line_number) +
                                  ": unknown key '" + std::string(key) + "'");
        }
    }
    config.validate();
    return config;
}

ToolConfig ToolConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config file '" + path + "'");
    }
    return load(in);
}

void ToolConfig::validate() const {
    require_positive(rho, "rho");
    require_positive(cp, "cp");
    require_positive(sigma_ult, "sigma_ult");
    require_positive(sn_a, "sn_a");
    require_positive(sn_b, "sn_b");
    require_positive(sn_m, "sn_m");
    require_positive(damage_b, "damage_B");
    require_positive(v_ref, "v_ref");
    require_positive(sigma_ref, "sigma_ref");
    require_positive(rotor_rpm, "rotor_rpm");
    require_positive(horizon_years, "horizon_years");
    require_positive(grid_step_years, "grid_step_years");
    require_positive(wind_shape, "wind_shape");
    require_positive(wind_scale, "wind_scale");
    if (n_bins < 1) {
        throw ValidationError("config: n_bins must be >= 1");
    }
    if (wind_samples < 1) {
        throw ValidationError("config: wind_samples must be >= 1");
    }
    if (n_paths < 1) {
        throw ValidationError("config: n_paths must be >= 1");
    }
    if (u_set && cov_ref_set) {
        throw ValidationError("config: set either cov_ref or u, not both");
    }
    if (u_set) require_positive(u, "u");
    else require_positive(cov_ref, "cov_ref");
    if (t_ref_years != 0.0) require_positive(t_ref_years, "t_ref_years");
    if (damage_a != 0.0) require_positive(damage_a, "damage_A");
    if (d_cr_list.empty()) {
        throw ValidationError("config: d_cr_list must not be empty");
    }
    std::vector<long> labels;
    for (const double d_cr : d_cr_list) {
        if (!(d_cr > 0.0) || d_cr > 1.0) {
            throw ValidationError("config: every d_cr must lie in (0, 1], got " +
                                  std::to_string(d_cr));
        }
        labels.push_back(std::lround(d_cr * 100.0));
    }
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
        throw ValidationError(
            "config: d_cr values collide when rendered as integer percent column labels");
    }
}

int ToolConfig::steps_per_year() const {
    const double steps = std::max(1.0, std::round(1.0 / grid_step_years));
    return static_cast<int>(steps);
}

}  // namespace bladeprog
