#pragma once

// Report rows and their two renderings: an aligned table and tab-separated
// records (check-id, degree, verdict, witness).

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

namespace chowcheck {

struct Record {
    std::string check;
    int degree = 0;
    std::string verdict;
    std::string witness;
    bool ok = true;
};

class Report {
public:
    void add(std::string check, int degree, std::string verdict, std::string witness, bool ok = true) {
        rows_.push_back({std::move(check), degree, std::move(verdict), std::move(witness), ok});
    }
    void append(const Report& other) { rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end()); }

    const std::vector<Record>& rows() const { return rows_; }
    bool ok() const {
        return std::all_of(rows_.begin(), rows_.end(), [](const Record& r) { return r.ok; });
    }
    std::vector<std::string> failures() const {
        std::vector<std::string> out;
        for (const auto& r : rows_)
            if (!r.ok) out.push_back(r.check + " (degree " + std::to_string(r.degree) + ")");
        return out;
    }

    void write_records(std::ostream& out) const {
        for (const auto& r : rows_) out << r.check << '\t' << r.degree << '\t' << r.verdict << '\t' << r.witness << '\n';
    }

    void write_table(std::ostream& out) const {
        std::size_t wc = 5, wv = 7;
        for (const auto& r : rows_) {
            wc = std::max(wc, r.check.size());
            wv = std::max(wv, r.verdict.size());
        }
        auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
        out << pad("check", wc) << "  " << pad("degree", 6) << "  " << pad("verdict", wv) << "  witness\n";
        out << std::string(wc, '-') << "  " << std::string(6, '-') << "  " << std::string(wv, '-') << "  -------\n";
        for (const auto& r : rows_)
            out << pad(r.check, wc) << "  " << pad(std::to_string(r.degree), 6) << "  " << pad(r.verdict, wv) << "  "
                << r.witness << (r.ok ? "" : "  <-- FAILED") << '\n';
    }

private:
    std::vector<Record> rows_;
};

}  // namespace chowcheck
