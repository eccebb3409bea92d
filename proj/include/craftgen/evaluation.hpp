#pragma once

#include <string>
#include <utility>
#include <vector>

namespace craftgen::evaluation {

/// designs x judges like/dislike votes, row-major.
class AnnotationMatrix {
public:
    AnnotationMatrix(int n_designs, int n_judges, std::vector<bool> votes);
    /// One inner vector per design; all rows must have the same length.
    static AnnotationMatrix from_rows(const std::vector<std::vector<bool>>& rows);

    int n_designs() const { return n_designs_; }
    int n_judges() const { return n_judges_; }
    bool vote(int design, int judge) const {
        return votes_[static_cast<std::size_t>(design) * n_judges_ + judge];
    }
    void set_vote(int design, int judge, bool liked) {
        votes_[static_cast<std::size_t>(design) * n_judges_ + judge] = liked;
    }
    /// Number of judges who liked the design.
    int likes(int design) const;

private:
    int n_designs_;
    int n_judges_;
    std::vector<bool> votes_;
};

/// Per design, the fraction of judges who liked it.
std::vector<double> like_rates(const AnnotationMatrix& m);

/// Largest integer x in [0, 100] such that at least x% of the designs are
/// liked by at least x% of the judges. Comparisons use integer arithmetic.
int likeability_index(const AnnotationMatrix& m);

struct LikeabilityReport {
    int index = 0;
    std::vector<double> rates;
};

LikeabilityReport likeability_report(const AnnotationMatrix& m);

struct ReportRow {
    std::string label;
    int index = 0;
};

std::vector<ReportRow> compare_report(
    const std::vector<std::pair<std::string, AnnotationMatrix>>& entries);

/// Aligned two-column text table.
std::string format_report_text(const std::vector<ReportRow>& rows);
/// "label,likeability_index" header plus one line per row.
std::string format_report_csv(const std::vector<ReportRow>& rows);

}  // namespace craftgen::evaluation
