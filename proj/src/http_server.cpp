#include "termtopics/http_server.hpp"

#include <charconv>
#include <sstream>
#include <filesystem>

#include "termtopics/errors.hpp"
#include "termtopics/log.hpp"

namespace termtopics {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, {{"error", message}}, status);
}

template <class Handler>
httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const NotFoundError& e) {
            send_error(res, 404, e.what());
        } catch (const LookupError& e) {
            send_error(res, 404, e.what());
        } catch (const ConflictError& e) {
            send_error(res, 409, e.what());
        } catch (const ValidationError& e) {
            send_error(res, 400, e.what());
        } catch (const IngestError& e) {
            send_error(res, 400, e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, e.what());
        } catch (const std::exception& e) {
            log_warning(std::string("request failed: ") + e.what());
            send_error(res, 500, e.what());
        }
    };
}

double parse_double(const std::string& name, const std::string& text) {
    double value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ValidationError("parameter '" + name + "' is not a number: '" + text + "'");
    }
    return value;
}

template <class Int>
Int parse_int(const std::string& name, const std::string& text) {
    Int value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ValidationError("parameter '" + name + "' is not an integer: '" + text + "'");
    }
    return value;
}

// A form field from a multipart body, else a query parameter.
std::optional<std::string> field(const httplib::Request& req, const std::string& name) {
    if (req.has_file(name)) {
        return req.get_file_value(name).content;
    }
    if (req.has_param(name)) {
        return req.get_param_value(name);
    }
    return std::nullopt;
}

TopicService::UploadRequest upload_request(const httplib::Request& req) {
    if (!req.is_multipart_form_data() || !req.has_file("file")) {
        throw ValidationError("expected a multipart upload with a 'file' field");
    }
    const auto& file = req.get_file_value("file");
    TopicService::UploadRequest up;
    up.content = file.content;
    if (auto v = field(req, "corpus_id"); v && !v->empty()) {
        up.corpus_id = *v;
    } else {
        up.corpus_id = std::filesystem::path(file.filename).stem().string();
    }
    if (auto v = field(req, "format")) {
        const auto format = parse_corpus_format(*v);
        if (!format) {
            throw ValidationError("unknown corpus format '" + *v + "'");
        }
        up.format = *format;
    }
    auto& r = up.ingest.ranking;
    if (auto v = field(req, "alpha")) {
        r.alpha = parse_double("alpha", *v);
    }
    if (auto v = field(req, "beta")) {
        r.beta = parse_double("beta", *v);
    }
    if (auto v = field(req, "window")) {
        r.window = parse_int<int>("window", *v);
    }
    if (auto v = field(req, "thin_percent")) {
        r.thin_percent = parse_double("thin_percent", *v);
    }
    if (auto v = field(req, "min_df")) {
        up.ingest.min_df = parse_int<std::size_t>("min_df", *v);
    }
    if (req.has_file("stopwords")) {
        std::istringstream in(req.get_file_value("stopwords").content);
        up.stopwords = StopwordSet::read(in);
    }
    return up;
}

std::vector<int> parse_topic_list(const std::string& text) {
    std::vector<int> topics;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, comma - start);
        if (!item.empty()) {
            topics.push_back(parse_int<int>("topics", item));
        }
        start = comma + 1;
    }
    return topics;
}

} // namespace

void configure_routes(httplib::Server& server, TopicService& service) {
    server.Post("/corpora", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    auto up = upload_request(req);
                    const std::string corpus_id = up.corpus_id;
                    const std::string job_id = service.add_corpus(std::move(up));
                    send_json(res, {{"job_id", job_id}, {"corpus_id", corpus_id}}, 202);
                }));

    server.Get("/corpora", guarded([&service](const httplib::Request&, httplib::Response& res) {
                   send_json(res, service.corpora_view());
               }));

    server.Get(R"(/corpora/([^/]+)/models)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.models_view(req.matches[1]));
               }));

    server.Post(R"(/corpora/([^/]+)/models)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    double gamma = 1.0;
                    std::uint64_t seed = 42;
                    if (!req.body.empty() && !req.is_multipart_form_data()) {
                        const json body = json::parse(req.body);
                        gamma = body.value("gamma", gamma);
                        seed = body.value("seed", seed);
                    }
                    if (req.has_param("gamma")) {
                        gamma = parse_double("gamma", req.get_param_value("gamma"));
                    }
                    if (req.has_param("seed")) {
                        seed = parse_int<std::uint64_t>("seed", req.get_param_value("seed"));
                    }
                    const auto ticket = service.request_model(req.matches[1], gamma, seed);
                    send_json(res,
                              {{"job_id", ticket.job_id}, {"model_id", ticket.model_id}, {"cached", ticket.cached}},
                              ticket.cached ? 200 : 202);
                }));

    server.Get(R"(/jobs/([^/]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.job_view(req.matches[1]));
               }));

    server.Get(R"(/models/([^/]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.model_view(req.matches[1]));
               }));

    server.Get(R"(/models/([^/]+)/map)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.map_view(req.matches[1]));
               }));

    server.Get(R"(/models/([^/]+)/topics)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.topics_view(req.matches[1]));
               }));

    server.Get(R"(/models/([^/]+)/topics/([^/]+))",
               guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   int topic = 0;
                   try {
                       topic = parse_int<int>("topic", req.matches[2]);
                   } catch (const ValidationError&) {
                       throw NotFoundError("unknown topic '" + std::string(req.matches[2]) + "'");
                   }
                   send_json(res, service.topic_view(req.matches[1], topic));
               }));

    server.Get(R"(/models/([^/]+)/documents/(.+))",
               guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.document_view(req.matches[1], req.matches[2]));
               }));

    server.Get(R"(/models/([^/]+)/timeseries)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   std::vector<int> topics;
                   if (req.has_param("topics")) {
                       topics = parse_topic_list(req.get_param_value("topics"));
                   }
                   send_json(res, service.timeseries_view(req.matches[1], topics));
               }));

    server.Get(R"(/models/([^/]+)/themes)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.themes_view(req.matches[1]));
               }));

    server.Get(R"(/models/([^/]+)/export/([^/]+))",
               guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   const std::string name = req.matches[2];
                   const auto kind = TopicService::parse_export_kind(name);
                   if (!kind) {
                       throw NotFoundError("unknown export '" + name + "'");
                   }
                   res.set_content(service.export_csv(req.matches[1], *kind), "text/csv; charset=utf-8");
                   res.set_header("Content-Disposition", "attachment; filename=\"" + name + ".csv\"");
               }));
}

void serve(TopicService& service, const std::string& host, int port) {
    httplib::Server server;
    configure_routes(server, service);
    log_info("listening on " + host + ":" + std::to_string(port));
    if (!server.listen(host, port)) {
        throw Error("cannot listen on " + host + ":" + std::to_string(port));
    }
}

} // namespace termtopics
