// Scripted stand-in for a norm-equation backend, driven by a rule file.
//
//   fake_backend RULES
//
// Each rule line is "degree sign |target| outcome [args]"; '*' matches
// anything and the first matching rule answers. Outcomes:
//   unsolvable CERTIFIED GRH     e.g. "8 + 5507 unsolvable 1 0"
//   solvable a0,a1,...           witness sent as given (not checked here)
//   bogus                        solvable with witness [1]
//   unknown
//   garbage                      a line that is not JSON
//   exit                         terminate without answering
// Requests matching no rule are answered "unknown".
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct Rule {
    std::string degree, sign, target, outcome;
    std::vector<std::string> args;
};

bool matches(std::string const & pat, std::string const & value)
{
    return pat == "*" || pat == value;
}

std::vector<Rule> load(char const * path)
{
    std::ifstream in(path);
    if (!in) {
        std::cerr << "fake_backend: cannot read " << path << "\n";
        std::exit(2);
    }
    std::vector<Rule> rules;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ss(line);
        Rule r;
        if (!(ss >> r.degree >> r.sign >> r.target >> r.outcome))
            continue;
        for (std::string a; ss >> a;)
            r.args.push_back(a);
        rules.push_back(r);
    }
    return rules;
}

} // namespace

int main(int argc, char ** argv)
{
    if (argc != 2) {
        std::cerr << "usage: fake_backend RULES\n";
        return 2;
    }
    auto rules = load(argv[1]);
    for (std::string line; std::getline(std::cin, line);) {
        json req = json::parse(line, nullptr, false);
        if (req.is_discarded())
            return 3;
        // target may exceed 64 bits in principle; compare as text
        std::string target = req["target"].dump();
        std::string sign = target[0] == '-' ? "-" : "+";
        if (sign == "-")
            target.erase(0, 1);
        std::string degree = std::to_string(req["minpoly"].size() - 1);

        json resp{{"id", req["id"]}, {"outcome", "unknown"}, {"certified", false}, {"grh", false}};
        for (auto const & r : rules) {
            if (!matches(r.degree, degree) || !matches(r.sign, sign) || !matches(r.target, target))
                continue;
            if (r.outcome == "exit")
                return 0;
            if (r.outcome == "garbage") {
                std::cout << "this is not json" << std::endl;
                goto next;
            }
            if (r.outcome == "unsolvable") {
                resp["outcome"] = "unsolvable";
                resp["certified"] = r.args.size() > 0 && r.args[0] == "1";
                resp["grh"] = r.args.size() > 1 && r.args[1] == "1";
            } else if (r.outcome == "solvable" || r.outcome == "bogus") {
                json w = json::array();
                if (r.outcome == "bogus") {
                    w.push_back(1);
                } else if (!r.args.empty()) {
                    std::istringstream cs(r.args[0]);
                    for (std::string c; std::getline(cs, c, ',');)
                        w.push_back(std::stoll(c));
                }
                resp["outcome"] = "solvable";
                resp["witness"] = w;
                resp["certified"] = true;
            }
            break;
        }
        std::cout << resp.dump() << std::endl;
    next:;
    }
    return 0;
}
