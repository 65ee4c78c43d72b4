// io.hpp: Locale-independent CSV output

#pragma once

#include <array>
#include <charconv>
#include <initializer_list>
#include <string>
#include <string_view>
#include <system_error>

#include "cca/params.hpp"

namespace cca::io {

inline constexpr std::string_view kUnitsNote = "frequencies in units of J, times in units of 1/J";

// 17 significant digits, shortest of fixed/scientific, '.' decimal point
// regardless of the global locale.
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf.data(), res.ptr);
}

inline std::string params_note(const ArrayParams::Spec& s) {
    return "n=" + std::to_string(s.n_cavities) + " eta=" + format_double(s.eta) + " kappa=" + format_double(s.kappa)
           + " omega_f=" + format_double(s.omega_f) + " delta=" + format_double(s.delta)
           + " j=" + format_double(s.coupling_j);
}

class CsvWriter {
public:
    CsvWriter(std::string_view what, std::string_view note, std::initializer_list<std::string_view> columns) {
        out_ += "# ";
        out_ += what;
        out_ += "; ";
        out_ += kUnitsNote;
        if (!note.empty()) {
            out_ += "; ";
            out_ += note;
        }
        out_ += '\n';
        bool first = true;
        for (auto c : columns) {
            if (!first) out_ += ',';
            out_ += c;
            first = false;
        }
        out_ += '\n';
    }

    CsvWriter& cell(double v) { return sep().append(format_double(v)); }
    CsvWriter& cell(int v) { return sep().append(std::to_string(v)); }
    CsvWriter& cell(std::string_view v) { return sep().append(v); }
    CsvWriter& empty() { return sep(); }

    void end_row() {
        out_ += '\n';
        row_open_ = false;
    }

    const std::string& str() const noexcept { return out_; }

private:
    CsvWriter& sep() {
        if (row_open_) out_ += ',';
        row_open_ = true;
        return *this;
    }
    CsvWriter& append(std::string_view s) {
        out_ += s;
        return *this;
    }

    std::string out_;
    bool row_open_{false};
};

} // namespace cca::io
