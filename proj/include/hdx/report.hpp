#ifndef HDX_REPORT_HPP
#define HDX_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace hdx {

using json = nlohmann::ordered_json;

// One verification entry. `anchor` is a stable machine-readable identifier of
// the property being checked, used for traceability across report versions.
struct Check {
    std::string id;
    std::string anchor;
    bool pass = false;
    json data = json::object();
};

struct Report {
    std::string suite;
    std::vector<Check> checks;

    bool all_pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(std::string id, std::string anchor, bool pass, json data = json::object()) {
        checks.push_back({std::move(id), std::move(anchor), pass, std::move(data)});
    }
    void merge(const Report& other) {
        for (auto& c : other.checks) checks.push_back(c);
    }
    json to_json() const {
        json arr = json::array();
        for (auto& c : checks)
            arr.push_back({{"check_id", c.id}, {"anchor", c.anchor}, {"status", c.pass ? "pass" : "fail"}, {"data", c.data}});
        return json{{"suite", suite}, {"pass", all_pass()}, {"checks", arr}};
    }
};

} // namespace hdx

#endif
