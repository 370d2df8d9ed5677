#pragma once

#include <string>

#include "sphlab/report.hpp"

namespace sphlab {

/// Log-log scatter of ratio against the first fit's abscissa (min degree when
/// the document has no fit), one <circle> per sample. Overlays the fitted line
/// with its slope printed to 4 decimals and a dashed C_emp * bound reference.
/// Byte-identical for equal documents. Throws std::invalid_argument below 2 samples.
std::string plot_svg(const ReportDocument& doc);

}  // namespace sphlab
