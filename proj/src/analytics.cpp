#include "termtopics/analytics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "termtopics/errors.hpp"
#include "termtopics/log.hpp"

namespace termtopics {

int dominant_topic(const Eigen::Ref<const Eigen::VectorXd>& proportions) {
    Eigen::Index best = 0;
    for (Eigen::Index t = 1; t < proportions.size(); ++t) {
        if (proportions(t) > proportions(best)) {
            best = t;
        }
    }
    return static_cast<int>(best);
}

DocumentMap document_map(const Eigen::MatrixXd& proportions, const TsneParams& params) {
    std::vector<std::size_t> rows;
    for (Eigen::Index d = 0; d < proportions.rows(); ++d) {
        if (proportions.row(d).sum() > 0) {
            rows.push_back(static_cast<std::size_t>(d));
        }
    }
    DocumentMap map;
    if (rows.empty()) {
        return map;
    }
    Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()), proportions.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        data.row(static_cast<Eigen::Index>(i)) = proportions.row(static_cast<Eigen::Index>(rows[i]));
    }
    const auto layout = tsne(data, params);
    map.kl_after_exaggeration = layout.kl_after_exaggeration;
    map.kl_final = layout.kl_final;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        map.points.push_back({rows[i], layout.embedding(r, 0), layout.embedding(r, 1),
                              dominant_topic(data.row(r).transpose())});
    }
    return map;
}

std::string YearMonth::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

std::vector<TopicSeries> topic_time_series(std::span<const int> topics, const Eigen::MatrixXd& proportions,
                                           std::span<const std::optional<Date>> dates) {
    for (int t : topics) {
        if (t < 0 || t >= proportions.cols()) {
            throw LookupError("unknown topic " + std::to_string(t));
        }
    }
    std::optional<YearMonth> first;
    std::optional<YearMonth> last;
    for (const auto& d : dates) {
        if (!d) {
            continue;
        }
        const YearMonth ym{d->year, d->month};
        if (!first || ym < *first) {
            first = ym;
        }
        if (!last || ym > *last) {
            last = ym;
        }
    }
    std::vector<TopicSeries> out;
    if (!first) {
        log_warning("no dated documents; time series are empty");
        for (int t : topics) {
            out.push_back({t, {}});
        }
        return out;
    }
    std::vector<YearMonth> months;
    for (YearMonth m = *first; m <= *last; m = m.next()) {
        months.push_back(m);
    }
    auto month_index = [&](const Date& d) {
        return static_cast<std::size_t>((d.year - first->year) * 12 + (d.month - first->month));
    };
    for (int t : topics) {
        TopicSeries series{t, {}};
        for (const auto& m : months) {
            series.values.emplace_back(m, 0.0);
        }
        for (std::size_t doc = 0; doc < dates.size(); ++doc) {
            if (dates[doc]) {
                series.values[month_index(*dates[doc])].second += proportions(static_cast<Eigen::Index>(doc), t);
            }
        }
        out.push_back(std::move(series));
    }
    return out;
}

ThemeCrosstab theme_crosstab(const Eigen::MatrixXd& proportions, std::span<const std::vector<std::string>> tags) {
    ThemeCrosstab out;
    std::set<std::string> all;
    for (const auto& doc_tags : tags) {
        all.insert(doc_tags.begin(), doc_tags.end());
    }
    out.tags.assign(all.begin(), all.end());
    out.documents.assign(out.tags.size(), 0);
    out.mean_proportion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out.tags.size()), proportions.cols());
    if (out.tags.empty()) {
        log_warning("no document carries a tag; theme crosstab is empty");
        return out;
    }
    for (std::size_t doc = 0; doc < tags.size(); ++doc) {
        // A tag repeated on one document counts once.
        std::set<std::string> unique(tags[doc].begin(), tags[doc].end());
        for (const auto& tag : unique) {
            const auto row = static_cast<std::size_t>(
                std::lower_bound(out.tags.begin(), out.tags.end(), tag) - out.tags.begin());
            ++out.documents[row];
            out.mean_proportion.row(static_cast<Eigen::Index>(row)) += proportions.row(static_cast<Eigen::Index>(doc));
        }
    }
    for (std::size_t row = 0; row < out.tags.size(); ++row) {
        out.mean_proportion.row(static_cast<Eigen::Index>(row)) /= static_cast<double>(out.documents[row]);
    }
    return out;
}

} // namespace termtopics
