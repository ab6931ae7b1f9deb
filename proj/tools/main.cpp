#include <iostream>

#include "commands.hpp"
#include "vitalink/error.hpp"
#include "vitalink/interpreter/http_model_client.hpp"
#include "vitalink/mock/mock_model.hpp"

namespace vitalink::cli {

std::unique_ptr<interpreter::ModelClient> make_model_client(const std::string& kind, int timeout_s) {
    if (kind == "stub") return std::make_unique<mock::MockModelClient>();
    if (kind == "live") {
        auto config = interpreter::HttpModelConfig::from_env();
        config.timeout_s = timeout_s;
        return std::make_unique<interpreter::HttpModelClient>(config);
    }
    throw ConfigError("model client must be stub or live, got " + kind);
}

}  // namespace vitalink::cli

int main(int argc, char** argv) {
    using namespace vitalink::cli;
    CLI::App app{"vitalink: wearable telemetry backend, device simulator and evaluation tools"};
    app.require_subcommand(1);
    add_simulate_device(app);
    add_decode(app);
    add_cost_study(app);
    add_eval(app);
    add_make_synthetic_dataset(app);
    add_serve(app);
    add_export_user(app);
    add_delete_user(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code;
    } catch (const vitalink::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
