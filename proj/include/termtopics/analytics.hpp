#ifndef TERMTOPICS_ANALYTICS_HPP
#define TERMTOPICS_ANALYTICS_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "termtopics/corpus.hpp"
#include "termtopics/tsne.hpp"

namespace termtopics {

struct MapPoint {
    std::size_t document = 0; ///< row in the proportion matrix
    double x = 0;
    double y = 0;
    int dominant_topic = 0;
};

struct DocumentMap {
    std::vector<MapPoint> points;
    double kl_after_exaggeration = 0;
    double kl_final = 0;
};

/// Index of the largest entry (lowest index on ties).
int dominant_topic(const Eigen::Ref<const Eigen::VectorXd>& proportions);

/// t-SNE of the documents with a non-zero proportion vector.
DocumentMap document_map(const Eigen::MatrixXd& proportions, const TsneParams& params = {});

struct YearMonth {
    int year = 0;
    int month = 1;

    auto operator<=>(const YearMonth&) const = default;
    YearMonth next() const { return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1}; }
    std::string to_string() const;
};

struct TopicSeries {
    int topic = 0;
    std::vector<std::pair<YearMonth, double>> values;
};

/// Per topic, the summed proportion of all documents dated in each month,
/// over the full min..max month range (zero-filled). Undated documents are
/// skipped; with no dated document every series is empty.
std::vector<TopicSeries> topic_time_series(std::span<const int> topics, const Eigen::MatrixXd& proportions,
                                           std::span<const std::optional<Date>> dates);

struct ThemeCrosstab {
    std::vector<std::string> tags;       ///< sorted
    std::vector<std::size_t> documents;  ///< documents carrying each tag
    Eigen::MatrixXd mean_proportion;     ///< tags x topics
};

/// Mean topic proportion over the documents carrying each tag.
ThemeCrosstab theme_crosstab(const Eigen::MatrixXd& proportions, std::span<const std::vector<std::string>> tags);

} // namespace termtopics

#endif // TERMTOPICS_ANALYTICS_HPP
