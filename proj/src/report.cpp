#include "obstructa/report.hpp"

#include <sstream>

namespace obstructa {

std::string window_params(const Window& w) {
    std::ostringstream os;
    os << "lmax=" << w.lmax << " emax=" << to_string(w.emax) << " kmax=" << w.kmax;
    if (w.deg_lo) os << " deg_lo=" << *w.deg_lo;
    if (w.deg_hi) os << " deg_hi=" << *w.deg_hi;
    if (w.credit_length) os << " credit=1";
    return os.str();
}

Report::Report(ReportFormat fmt, const Window& w, std::string topic)
    : fmt_(fmt), topic_(std::move(topic)), window_(window_params(w)) {
    if (fmt_ == ReportFormat::Records) {
        lines_.push_back("report topic=" + topic_ + " " + window_);
    } else {
        lines_.push_back("== " + topic_ + " [" + window_ + "]");
    }
}

void Report::kv(const std::string& key, const std::string& value) {
    if (fmt_ == ReportFormat::Records)
        lines_.push_back("value topic=" + topic_ + " " + key + "=" + value);
    else
        lines_.push_back("  " + key + ": " + value);
}

void Report::row(const std::vector<std::pair<std::string, std::string>>& fields) {
    std::ostringstream os;
    if (fmt_ == ReportFormat::Records) {
        os << "row topic=" << topic_;
        for (const auto& [k, v] : fields) os << " " << k << "=" << v;
    } else {
        os << " ";
        for (const auto& [k, v] : fields) os << " " << k << "=" << v;
    }
    lines_.push_back(os.str());
}

void Report::note(const std::string& text) {
    if (fmt_ == ReportFormat::Records)
        lines_.push_back("note topic=" + topic_ + " text=\"" + text + "\"");
    else
        lines_.push_back("  " + text);
}

void Report::dims(const std::vector<DegreeDims>& rows) {
    for (const auto& r : rows)
        row({{"degree", std::to_string(r.degree)},
             {"cells", std::to_string(r.cells)},
             {"ker", std::to_string(r.ker)},
             {"im", std::to_string(r.im_in)},
             {"hom", std::to_string(r.hom)}});
}

void Report::graded(const std::vector<GradedDims>& rows) {
    for (const auto& r : rows)
        row({{"graded_degree", std::to_string(r.degree)},
             {"level", std::to_string(r.level)},
             {"dim", std::to_string(r.dim)}});
}

void Report::defects(const DefectReport& rep, const std::vector<std::string>& ids,
                     const std::vector<std::string>& mod_ids) {
    if (rep.empty()) {
        kv("defects", "none");
        return;
    }
    kv("defects", std::to_string(rep.entries.size()));
    const DefectEntry* worst = rep.worst();
    for (const auto& e : rep.entries) {
        Flavor f = e.word.marked() ? Flavor::Module : Flavor::Plain;
        row({{"word", format_word(e.word, f, ids, mod_ids)},
             {"residual", e.residual.str(ids, mod_ids)},
             {"worst", &e == worst ? "1" : "0"}});
    }
}

void Report::emit(std::ostream& os) const {
    for (const auto& line : lines_) os << line << "\n";
}

}  // namespace obstructa
