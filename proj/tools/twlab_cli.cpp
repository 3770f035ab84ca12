// twlab command-line front end. Everything goes through the C API.

#include <CLI11.hpp>
#include <cctype>
#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "twlab.h"

namespace {

struct ConfigDeleter {
    void operator()(twlab_config* c) const { twlab_config_free(c); }
};
using ConfigPtr = std::unique_ptr<twlab_config, ConfigDeleter>;

int config_error(const std::string& msg) {
    std::string esc;
    for (char c : msg) {
        if (c == '"' || c == '\\') esc += '\\';
        esc += (c == '\n') ? ' ' : c;
    }
    std::fprintf(stderr, "{\"error\":{\"code\":\"ConfigError\",\"message\":\"%s\"}}\n", esc.c_str());
    return 2;
}

int last_error() {
    std::fprintf(stderr, "%s\n", twlab_last_error_json());
    return 2;
}

// "--opt -4:4:0.1" would be read as a short flag; glue such values onto the option.
std::vector<std::string> glue_negative_values(int argc, char** argv, const std::set<std::string>& valued) {
    std::vector<std::string> out;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (valued.count(a) && i + 1 < argc) {
            std::string v = argv[i + 1];
            if (v.size() > 1 && v[0] == '-' && (std::isdigit((unsigned char)v[1]) || v[1] == '.')) {
                out.push_back(a + "=" + v);
                ++i;
                continue;
            }
        }
        out.push_back(a);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tracy-Widom beta = 2 and beta = 6 distributions from Painleve II", "twlab"};
    app.set_version_flag("--version", std::string("twlab ") + twlab_version());
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "key = value run configuration")->check(CLI::ExistingFile);

    std::map<std::string, std::string> given;  // key -> value
    std::set<std::string> valued{"--config", "--out"};
    std::string out_dir;
    app.add_option("--out", out_dir, "output directory (out.dir)");

    // one flag per config key, plus short aliases
    const std::map<std::string, std::string> alias{{"grid.t", "--t"}, {"grid.window", "--window"},
                                                   {"oracle.seed", "--seed"}};
    for (size_t i = 0; i < twlab_config_key_count(); ++i) {
        std::string key = twlab_config_key(i);
        if (key == "command") continue;
        std::string names = "--" + key;
        valued.insert(names);
        if (auto it = alias.find(key); it != alias.end()) {
            names += "," + it->second;
            valued.insert(it->second);
        }
        app.add_option_function<std::string>(names, [&given, key](const std::string& v) { given[key] = v; },
                                              "config key " + key);
    }

    const std::map<std::string, std::string> about{
        {"hm-solve", "Hastings-McLeod solution on the hm grid"},
        {"aux-solve", "auxiliary system, both routes compared"},
        {"tw-table", "table of F_beta on grid.t (--beta 2|6)"},
        {"verify-identities", "algebraic and trajectory identity residuals"},
        {"verify-pde", "PDE residual of the constructed field, Richardson ratio, negative control"},
        {"mc-edge", "largest eigenvalue samples of the tridiagonal model, KS distance"},
        {"fredholm-f2", "Airy-kernel determinant against the Painleve F_2"},
        {"tails-compare", "left-tail constant: fitted vs closed form"}};
    std::vector<CLI::App*> subs;
    for (size_t i = 0; i < twlab_command_count(); ++i) {
        std::string name = twlab_command_name(i);
        subs.push_back(app.add_subcommand(name, about.count(name) ? about.at(name) : ""));
    }

    auto args = glue_negative_values(argc, argv, valued);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return config_error(e.what());
    }

    ConfigPtr cfg(config_path.empty() ? twlab_config_new() : twlab_config_load(config_path.c_str()));
    if (!cfg) return last_error();
    for (auto* s : subs)
        if (s->parsed() && twlab_config_set(cfg.get(), "command", s->get_name().c_str())) return last_error();
    if (!out_dir.empty()) given["out.dir"] = out_dir;
    for (const auto& [k, v] : given)
        if (twlab_config_set(cfg.get(), k.c_str(), v.c_str())) return last_error();

    int rc = twlab_run(cfg.get());
    if (*twlab_last_manifest_path()) std::printf("%s\n", twlab_last_manifest_path());
    if (rc != 0) std::fprintf(stderr, "%s\n", twlab_last_error_json());
    return rc;
}
