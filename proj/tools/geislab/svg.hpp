#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace geislab::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Line plot; non-positive values are dropped on logarithmic axes.
void plot(const std::filesystem::path& path, const std::string& title, const std::vector<Series>& series,
          bool log_x, bool log_y);

}  // namespace geislab::svg
