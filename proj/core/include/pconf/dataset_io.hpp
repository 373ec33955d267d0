#pragma once

#include <string>
#include <vector>

#include "pconf/risk.hpp"

namespace pconf {

// CSV formats (UTF-8, LF line endings, '.' decimal point):
//   Pconf:   header "x1,...,xd,r",  one sample per row
//   labeled: header "x1,...,xd,y",  y written as 1 / -1
// Doubles are written with 17 significant digits so files round-trip
// exactly.

std::vector<PconfSample> read_pconf_csv(const std::string& path);
std::vector<LabeledSample> read_labeled_csv(const std::string& path);

void write_pconf_csv(const std::string& path, std::span<const PconfSample> samples);
void write_labeled_csv(const std::string& path, std::span<const LabeledSample> samples);

// Peeks at the header: "pconf", "labeled".
std::string detect_csv_kind(const std::string& path);

}  // namespace pconf
