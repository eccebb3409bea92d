#include "craftgen/evaluation.hpp"

#include <algorithm>
#include <sstream>

#include "craftgen/error.hpp"

namespace craftgen::evaluation {

AnnotationMatrix::AnnotationMatrix(int n_designs, int n_judges, std::vector<bool> votes)
    : n_designs_(n_designs), n_judges_(n_judges), votes_(std::move(votes)) {
    if (n_designs_ < 1) throw Error("annotation matrix needs at least one design");
    if (n_judges_ < 1) throw Error("annotation matrix needs at least one judge");
    if (votes_.size() != static_cast<std::size_t>(n_designs_) * static_cast<std::size_t>(n_judges_)) {
        throw Error("annotation matrix is not fully populated");
    }
}

AnnotationMatrix AnnotationMatrix::from_rows(const std::vector<std::vector<bool>>& rows) {
    if (rows.empty()) throw Error("annotation matrix needs at least one design");
    std::vector<bool> votes;
    const std::size_t judges = rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != judges) throw Error("annotation rows have different judge counts");
        votes.insert(votes.end(), r.begin(), r.end());
    }
    return AnnotationMatrix(static_cast<int>(rows.size()), static_cast<int>(judges), std::move(votes));
}

int AnnotationMatrix::likes(int design) const {
    int n = 0;
    for (int j = 0; j < n_judges_; ++j) n += vote(design, j) ? 1 : 0;
    return n;
}

std::vector<double> like_rates(const AnnotationMatrix& m) {
    std::vector<double> rates;
    rates.reserve(static_cast<std::size_t>(m.n_designs()));
    for (int d = 0; d < m.n_designs(); ++d) {
        rates.push_back(static_cast<double>(m.likes(d)) / m.n_judges());
    }
    return rates;
}

int likeability_index(const AnnotationMatrix& m) {
    std::vector<long long> likes;
    for (int d = 0; d < m.n_designs(); ++d) likes.push_back(m.likes(d));
    const long long judges = m.n_judges();
    const long long designs = m.n_designs();
    for (long long x = 100; x > 0; --x) {
        // like-rate >= x/100  <=>  100 * likes >= x * judges
        const auto liked = std::count_if(likes.begin(), likes.end(),
                                         [&](long long l) { return 100 * l >= x * judges; });
        if (100 * static_cast<long long>(liked) >= x * designs) return static_cast<int>(x);
    }
    return 0;
}

LikeabilityReport likeability_report(const AnnotationMatrix& m) {
    return {likeability_index(m), like_rates(m)};
}

std::vector<ReportRow> compare_report(
    const std::vector<std::pair<std::string, AnnotationMatrix>>& entries) {
    if (entries.empty()) throw Error("report needs at least one entry");
    std::vector<ReportRow> rows;
    for (const auto& [label, matrix] : entries) rows.push_back({label, likeability_index(matrix)});
    return rows;
}

std::string format_report_text(const std::vector<ReportRow>& rows) {
    std::size_t width = std::string("design set").size();
    for (const auto& r : rows) width = std::max(width, r.label.size());
    std::ostringstream out;
    auto line = [&](const std::string& label, const std::string& value) {
        out << label << std::string(width - label.size() + 2, ' ') << value << '\n';
    };
    line("design set", "likeability-index");
    for (const auto& r : rows) line(r.label, std::to_string(r.index));
    return out.str();
}

std::string format_report_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "label,likeability_index\n";
    for (const auto& r : rows) {
        const bool quote = r.label.find_first_of(",\"\n") != std::string::npos;
        if (quote) {
            std::string escaped;
            for (char c : r.label) {
                if (c == '"') escaped += '"';
                escaped += c;
            }
            out << '"' << escaped << '"';
        } else {
            out << r.label;
        }
        out << ',' << r.index << '\n';
    }
    return out.str();
}

}  // namespace craftgen::evaluation
