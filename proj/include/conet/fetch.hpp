#pragma once
// Record-fetch client speaking the same line-delimited format as ingest.
// Retries transient failures with backoff and honors a requests-per-second
// budget; exercised against a local fixture server in the tests.

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "conet/common.hpp"
#include "conet/corpus.hpp"

namespace conet {

struct FetchConfig {
    std::string base_url = "http://localhost:8080";
    std::string path = "/records";
    std::string api_key_env = "CONET_API_KEY";
    double requests_per_second = 3.0;
    int max_retries = 3;
    int backoff_ms = 100;  // doubled per retry
};

struct FetchWindow {
    int year = 0;
    int month_lo = 1;
    int month_hi = 12;
};

struct FetchResult {
    std::vector<DocumentRecord> records;
    std::vector<Rejection> rejections;  // per-item malformed payload lines
};

inline FetchResult fetch_remote(const FetchConfig& cfg, const FetchWindow& window) {
    if (window.month_lo > window.month_hi) return {};  // empty window, no error
    httplib::Client client(cfg.base_url);
    client.set_connection_timeout(5);
    client.set_read_timeout(10);

    httplib::Headers headers;
    if (const char* key = std::getenv(cfg.api_key_env.c_str()))
        headers.emplace("X-Api-Key", key);

    const auto min_gap = std::chrono::duration<double>(
        cfg.requests_per_second > 0.0 ? 1.0 / cfg.requests_per_second : 0.0);
    auto last_request = std::chrono::steady_clock::now() - min_gap;

    FetchResult result;
    for (int month = window.month_lo; month <= window.month_hi; ++month) {
        const std::string url = cfg.path + "?year=" + std::to_string(window.year) +
                                "&month=" + std::to_string(month);
        std::string body;
        bool ok = false;
        int backoff = cfg.backoff_ms;
        for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
            std::this_thread::sleep_until(last_request + min_gap);
            last_request = std::chrono::steady_clock::now();
            auto res = client.Get(url, headers);
            if (res && res->status == 200) {
                body = res->body;
                ok = true;
                break;
            }
            const bool transient = !res || res->status == 429 || res->status >= 500;
            if (!transient)
                throw DataError("fetch failed with status " + std::to_string(res->status) +
                                " for " + url);
            if (attempt < cfg.max_retries) {
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
                backoff *= 2;
            }
        }
        if (!ok)
            throw DataError("fetch: persistent failure after " +
                            std::to_string(cfg.max_retries + 1) + " attempts for " + url);

        std::size_t lineno = 0;
        for (const auto line : split(body, '\n')) {
            ++lineno;
            const auto sv = trim(line);
            if (sv.empty() || sv.front() == '#') continue;
            DocumentRecord rec;
            std::string reason;
            if (parse_record_line(sv, rec, reason))
                result.records.push_back(std::move(rec));
            else
                result.rejections.push_back({lineno, reason});
        }
    }
    return result;
}

}  // namespace conet
