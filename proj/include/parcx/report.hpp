#pragma once

/* Structured pass/fail reports produced by the verification routines.
 *
 * A report is an ordered list of named checks.  Order is always the
 * insertion order, so a report serializes deterministically; failed
 * checks carry a human-readable witness in `details`.
 */

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace parcx {

struct CheckEntry {
    std::string name;
    bool pass = true;
    std::string details;
};

class VerificationReport {
  public:
    VerificationReport() = default;
    explicit VerificationReport(std::string title) : title_(std::move(title)) {}

    const std::string& title() const { return title_; }
    const std::vector<CheckEntry>& checks() const { return checks_; }

    void add(std::string name, bool pass, std::string details = "") {
        checks_.push_back({std::move(name), pass, std::move(details)});
    }

    /* Append every check of `sub`, name-prefixed by its title. */
    void absorb(const VerificationReport& sub) {
        for (const auto& c : sub.checks()) {
            std::string name = sub.title().empty() ? c.name : sub.title() + ": " + c.name;
            checks_.push_back({std::move(name), c.pass, c.details});
        }
    }

    bool pass() const {
        for (const auto& c : checks_)
            if (!c.pass) return false;
        return true;
    }

    int size() const { return static_cast<int>(checks_.size()); }

    int failure_count() const {
        int n = 0;
        for (const auto& c : checks_)
            if (!c.pass) ++n;
        return n;
    }

    /* First failed check, or nullptr when everything passed. */
    const CheckEntry* first_failure() const {
        for (const auto& c : checks_)
            if (!c.pass) return &c;
        return nullptr;
    }

    nlohmann::json to_json() const {
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& c : checks_) {
            nlohmann::json e;
            e["name"] = c.name;
            e["pass"] = c.pass;
            if (!c.details.empty()) e["details"] = c.details;
            checks.push_back(std::move(e));
        }
        nlohmann::json out;
        out["title"] = title_;
        out["pass"] = pass();
        out["checks"] = std::move(checks);
        return out;
    }

    /* One line per check, suitable for terminal output. */
    std::string to_text() const {
        std::string out;
        if (!title_.empty()) out += title_ + "\n";
        for (const auto& c : checks_) {
            out += (c.pass ? "  [pass] " : "  [FAIL] ") + c.name;
            if (!c.pass && !c.details.empty()) out += " -- " + c.details;
            out += "\n";
        }
        return out;
    }

  private:
    std::string title_;
    std::vector<CheckEntry> checks_;
};

}  // namespace parcx
