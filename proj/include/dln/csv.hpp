#pragma once

// Small CSV writer.  Comment lines (prefixed '#') may carry run metadata;
// the body — header row plus data rows — is deterministic for a fixed
// configuration and seed, so reruns are byte-identical below the comments.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dln {

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
        out_.precision(17);
    }

    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void header(const std::vector<std::string>& names) { write_row(names); }

    template <typename... Ts>
    void row(const Ts&... fields) {
        std::vector<std::string> cells;
        (cells.push_back(to_cell(fields)), ...);
        write_row(cells);
    }

  private:
    template <typename T>
    static std::string to_cell(const T& v) {
        std::ostringstream ss;
        ss.precision(17);
        ss << v;
        return ss.str();
    }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); i++) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

    std::ofstream out_;
};

}  // namespace dln
