#include "qdeconv/observable_io.h"

#include <optional>
#include <vector>

#include "qdeconv/errors.h"
#include "qdeconv/format.h"

namespace qdeconv {

namespace {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

std::vector<Token> split_fields(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        if (i >= line.size()) {
            break;
        }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            ++i;
        }
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

struct Record {
    PauliIndex idx;
    std::vector<double> numbers;
};

// Shared line scanner: returns one record per non-comment line, with
// `min_numbers`..`max_numbers` numeric fields after the label.
std::vector<Record> scan_records(std::string_view text, std::size_t min_numbers, std::size_t max_numbers) {
    std::vector<Record> records;
    std::optional<std::size_t> width;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        ++line_no;
        pos = eol + 1;

        auto fields = split_fields(line);
        if (fields.empty() || fields.front().text.front() == '#') {
            if (eol == text.size()) {
                break;
            }
            continue;
        }
        const Token &label = fields.front();
        for (std::size_t c = 0; c < label.text.size(); ++c) {
            char ch = label.text[c];
            if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z') {
                throw ParseError("invalid Pauli letter '" + std::string(1, ch) + "'", line_no, label.column + c);
            }
        }
        if (label.text.size() > static_cast<std::size_t>(kMaxIndexQubits)) {
            throw ParseError("Pauli string too long", line_no, label.column);
        }
        if (width && *width != label.text.size()) {
            throw ParseError("Pauli string length " + std::to_string(label.text.size()) + " differs from " +
                                 std::to_string(*width) + " on earlier lines",
                             line_no, label.column);
        }
        width = label.text.size();
        const std::size_t count = fields.size() - 1;
        if (count < min_numbers || count > max_numbers) {
            std::size_t col = count < min_numbers ? line.size() + 1 : fields[max_numbers + 1].column;
            throw ParseError("expected " + std::to_string(min_numbers) +
                                 (min_numbers == max_numbers ? "" : "-" + std::to_string(max_numbers)) +
                                 " numeric field(s) after the Pauli string",
                             line_no, col);
        }
        Record rec{PauliIndex::from_label(label.text), {}};
        for (std::size_t f = 1; f < fields.size(); ++f) {
            auto value = parse_double(fields[f].text);
            if (!value) {
                throw ParseError("malformed number \"" + std::string(fields[f].text) + "\"", line_no,
                                 fields[f].column);
            }
            rec.numbers.push_back(*value);
        }
        for (const auto &prev : records) {
            if (prev.idx == rec.idx) {
                throw ParseError("duplicate Pauli string " + rec.idx.label(), line_no, label.column);
            }
        }
        records.push_back(std::move(rec));
        if (eol == text.size()) {
            break;
        }
    }
    return records;
}

}  // namespace

Observable parse_observable(std::string_view text) {
    auto records = scan_records(text, 1, 1);
    if (records.empty()) {
        throw ParseError("observable has no terms", 1, 0);
    }
    Observable::Terms terms;
    for (const auto &rec : records) {
        terms.emplace(rec.idx, rec.numbers[0]);
    }
    return Observable(records.front().idx.num_qubits(), terms, 0.0);
}

std::string format_observable(const Observable &obs) {
    std::string out;
    for (const auto &[idx, c] : obs.terms()) {
        out += idx.label();
        out += ' ';
        out += format_double(c);
        out += '\n';
    }
    return out;
}

MeasurementTable parse_measurements(std::string_view text) {
    MeasurementTable table;
    for (auto &rec : scan_records(text, 1, 2)) {
        Measurement m{rec.numbers[0], rec.numbers.size() > 1 ? rec.numbers[1] : 0.0};
        if (m.std_error < 0.0) {
            throw InvalidArgument("negative standard error for " + rec.idx.label());
        }
        table.emplace(rec.idx, m);
    }
    return table;
}

std::string format_measurements(const MeasurementTable &table) {
    std::string out;
    for (const auto &[idx, m] : table) {
        out += idx.label() + ' ' + format_double(m.value) + ' ' + format_double(m.std_error) + '\n';
    }
    return out;
}

}  // namespace qdeconv
