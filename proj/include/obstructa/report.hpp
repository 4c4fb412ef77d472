#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "obstructa/algebra.hpp"
#include "obstructa/window.hpp"

namespace obstructa {

enum class ReportFormat { Text, Records };

// Deterministic report assembly: records are line-delimited `key=value`
// rows suitable for diffing; text is a small human-readable table. Every
// record carries the window parameters.
class Report {
  public:
    Report(ReportFormat fmt, const Window& w, std::string topic);

    void kv(const std::string& key, const std::string& value);
    void row(const std::vector<std::pair<std::string, std::string>>& fields);
    void note(const std::string& text);

    void dims(const std::vector<DegreeDims>& rows);
    void graded(const std::vector<GradedDims>& rows);
    void defects(const DefectReport& rep, const std::vector<std::string>& ids,
                 const std::vector<std::string>& mod_ids = {});

    void emit(std::ostream& os) const;

  private:
    ReportFormat fmt_;
    std::string topic_;
    std::string window_;
    std::vector<std::string> lines_;
};

std::string window_params(const Window& w);

}  // namespace obstructa
