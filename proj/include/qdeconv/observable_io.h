#ifndef QDECONV_OBSERVABLE_IO_H
#define QDECONV_OBSERVABLE_IO_H

#include <map>
#include <string>
#include <string_view>

#include "qdeconv/pauli.h"

namespace qdeconv {

// Text format shared by observable and measurement files: one
// `<pauli-string> <number> [<number>]` record per line, e.g. `ZZZ 1.0`.
// Blank lines and lines starting with '#' are ignored. All labels in a file
// must have the same length; duplicate labels are rejected.

/// Parses `<pauli-string> <coefficient>` lines.
Observable parse_observable(std::string_view text);

/// One line per stored term in flat-index order, coefficients in shortest
/// round-trip form. parse_observable(format_observable(o)) == o bit-exactly.
std::string format_observable(const Observable &obs);

struct Measurement {
    double value = 0.0;
    double std_error = 0.0;
};
using MeasurementTable = std::map<PauliIndex, Measurement>;

/// Parses `<pauli-string> <value> [<std-error>]` lines.
MeasurementTable parse_measurements(std::string_view text);
std::string format_measurements(const MeasurementTable &table);

}  // namespace qdeconv

#endif
