#pragma once
// Document store: ingest of line-delimited records, journal tier tables,
// and filtered corpus views.

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "conet/common.hpp"

namespace conet {

// Dotted hierarchical concept identifier, e.g. "C04.588".
// The first-level parent is the prefix before the first dot.
inline bool valid_concept_code(std::string_view code) {
    if (code.empty() || !std::isalpha(static_cast<unsigned char>(code[0]))) return false;
    bool seen_digit = false;
    bool prev_dot = false;
    for (std::size_t i = 1; i < code.size(); ++i) {
        const char c = code[i];
        if (c == '.') {
            if (prev_dot || !seen_digit) return false;
            prev_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            seen_digit = true;
            prev_dot = false;
        } else {
            return false;
        }
    }
    return seen_digit && !prev_dot;
}

inline std::string first_level_category(std::string_view code) {
    const auto pos = code.find('.');
    return std::string(pos == std::string_view::npos ? code : code.substr(0, pos));
}

// Truncates deeper codes to their second-level ancestor (first two
// dot-segments); codes at or above that depth pass through unchanged.
inline std::string second_level_code(std::string_view code) {
    const auto first = code.find('.');
    if (first == std::string_view::npos) return std::string(code);
    const auto second = code.find('.', first + 1);
    return std::string(second == std::string_view::npos ? code : code.substr(0, second));
}

struct DocumentRecord {
    std::string doc_id;
    int year = 0;
    int month = 0;  // 1..12
    std::string journal_id;
    std::set<std::string> concepts;  // set semantics: duplicates collapse
};

enum class TierLabel { Impactful, NonImpactful, Unranked };

inline std::string to_string(TierLabel t) {
    switch (t) {
        case TierLabel::Impactful: return "I";
        case TierLabel::NonImpactful: return "NI";
        default: return "unranked";
    }
}

// Policy for a journal ranked more than once in the same year (e.g. several
// subject areas). The source does not pin this down, so it is a config choice.
enum class DuplicateRankPolicy { Error, Best, Worst };

class JournalTierTable {
public:
    void add(int year, const std::string& journal, double percentile,
             DuplicateRankPolicy policy = DuplicateRankPolicy::Error) {
        if (percentile < 0.0 || percentile > 1.0)
            throw DataError("percentile out of [0,1] for journal " + journal);
        auto& slot = table_[year][journal];
        if (slot) {
            switch (policy) {
                case DuplicateRankPolicy::Error:
                    throw DataError("duplicate ranking for (" + std::to_string(year) + ", " + journal + ")");
                case DuplicateRankPolicy::Best:
                    slot = std::min(*slot, percentile);
                    break;
                case DuplicateRankPolicy::Worst:
                    slot = std::max(*slot, percentile);
                    break;
            }
        } else {
            slot = percentile;
        }
    }

    std::optional<double> percentile(int year, const std::string& journal) const {
        auto yit = table_.find(year);
        if (yit == table_.end()) return std::nullopt;
        auto jit = yit->second.find(journal);
        if (jit == yit->second.end()) return std::nullopt;
        return jit->second;
    }

    // percentile 0 = best rank; the boundary percentile == cutoff counts as I.
    TierLabel classify(int year, const std::string& journal, double cutoff = 0.10) const {
        if (!(cutoff > 0.0 && cutoff < 1.0)) throw ConfigError("tier cutoff must be in (0,1)");
        const auto p = percentile(year, journal);
        if (!p) return TierLabel::Unranked;
        return *p <= cutoff ? TierLabel::Impactful : TierLabel::NonImpactful;
    }

    // ranking.tsv: year <TAB> journal_id <TAB> percentile
    static JournalTierTable from_stream(std::istream& in,
                                        DuplicateRankPolicy policy = DuplicateRankPolicy::Error) {
        JournalTierTable t;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto sv = trim(std::string_view(line));
            if (sv.empty() || sv.front() == '#') continue;
            const auto fields = split(sv, '\t');
            if (fields.size() != 3)
                throw DataError("ranking line " + std::to_string(lineno) + ": expected 3 fields");
            try {
                t.add(std::stoi(std::string(fields[0])), std::string(trim(fields[1])),
                      std::stod(std::string(fields[2])), policy);
            } catch (const std::invalid_argument&) {
                throw DataError("ranking line " + std::to_string(lineno) + ": unparsable value");
            }
        }
        return t;
    }

private:
    std::map<int, std::unordered_map<std::string, std::optional<double>>> table_;
};

struct Rejection {
    std::size_t line = 0;
    std::string reason;
};

struct IngestReport {
    std::size_t accepted = 0;
    std::size_t duplicates = 0;  // re-ingested doc_ids, kept once
    std::vector<Rejection> rejections;
};

// Parses one corpus line; returns false with a reason on malformed input.
inline bool parse_record_line(std::string_view sv, DocumentRecord& rec, std::string& reason) {
    const auto fields = split(sv, '\t');
    if (fields.size() != 5) {
        reason = "expected 5 tab-separated fields";
        return false;
    }
    rec = DocumentRecord{};
    rec.doc_id = std::string(trim(fields[0]));
    rec.journal_id = std::string(trim(fields[3]));
    if (rec.doc_id.empty()) {
        reason = "missing doc_id";
        return false;
    }
    try {
        rec.year = std::stoi(std::string(fields[1]));
        rec.month = std::stoi(std::string(fields[2]));
    } catch (const std::invalid_argument&) {
        reason = "missing or unparsable year/month";
        return false;
    }
    if (rec.month < 1 || rec.month > 12) {
        reason = "month out of [1,12]";
        return false;
    }
    if (rec.journal_id.empty()) {
        reason = "missing journal_id";
        return false;
    }
    for (const auto c : split(fields[4], ',')) {
        const auto code = trim(c);
        if (!code.empty()) rec.concepts.insert(std::string(code));
    }
    if (rec.concepts.empty()) {
        reason = "no concept codes";
        return false;
    }
    return true;
}

// Immutable once ingested; views are cheap snapshots over the stored records.
class CorpusStore {
public:
    // corpus.tsv: doc_id <TAB> year <TAB> month <TAB> journal_id <TAB> code1,code2,...
    IngestReport ingest(std::istream& in) {
        IngestReport report;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto sv = trim(std::string_view(line));
            if (sv.empty() || sv.front() == '#') continue;
            DocumentRecord rec;
            std::string reason;
            if (!parse_record_line(sv, rec, reason)) {
                report.rejections.push_back({lineno, reason});
                continue;
            }
            if (by_id_.count(rec.doc_id)) {
                ++report.duplicates;
                continue;
            }
            by_id_.emplace(rec.doc_id, records_.size());
            records_.push_back(std::move(rec));
            ++report.accepted;
        }
        return report;
    }

    std::size_t size() const { return records_.size(); }
    const std::vector<DocumentRecord>& records() const { return records_; }

    std::map<int, std::size_t> counts_by_year() const {
        std::map<int, std::size_t> c;
        for (const auto& r : records_) ++c[r.year];
        return c;
    }

    std::map<std::pair<int, int>, std::size_t> counts_by_year_month() const {
        std::map<std::pair<int, int>, std::size_t> c;
        for (const auto& r : records_) ++c[{r.year, r.month}];
        return c;
    }

    // All distinct concept codes seen, lexicographically sorted. With rollup,
    // codes collapse to second-level ancestors first.
    std::vector<std::string> concept_universe(bool rollup = false) const {
        std::set<std::string> codes;
        for (const auto& r : records_)
            for (const auto& c : r.concepts)
                codes.insert(rollup ? second_level_code(c) : c);
        return {codes.begin(), codes.end()};
    }

    // Rewrites every document's concepts to second-level ancestors in place.
    void rollup_concepts() {
        for (auto& r : records_) {
            std::set<std::string> rolled;
            for (const auto& c : r.concepts) rolled.insert(second_level_code(c));
            r.concepts = std::move(rolled);
        }
    }

private:
    std::vector<DocumentRecord> records_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

struct CorpusView {
    std::vector<const DocumentRecord*> records;  // ordered by doc_id
    std::string tier_name;
    int year = 0;
    std::optional<int> month;

    std::size_t count() const { return records.size(); }
};

inline CorpusView make_view(const CorpusStore& store, const JournalTierTable& table,
                            TierLabel tier, int year, std::optional<int> month = {},
                            double cutoff = 0.10) {
    CorpusView view;
    view.year = year;
    view.month = month;
    view.tier_name = to_string(tier);
    if (tier == TierLabel::NonImpactful && month) view.tier_name = "NI-" + std::to_string(*month);
    for (const auto& r : store.records()) {
        if (r.year != year) continue;
        if (month && r.month != *month) continue;
        if (table.classify(year, r.journal_id, cutoff) != tier) continue;
        view.records.push_back(&r);
    }
    std::sort(view.records.begin(), view.records.end(),
              [](const DocumentRecord* a, const DocumentRecord* b) { return a->doc_id < b->doc_id; });
    return view;
}

}  // namespace conet
