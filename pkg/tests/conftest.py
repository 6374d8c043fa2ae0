import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    # one visible pass/fail line per acceptance criterion
    if rep.when == "call" and item.get_closest_marker("criterion"):
        name = item.get_closest_marker("criterion").args[0]
        status = "PASS" if rep.passed else "FAIL"
        capman = item.config.pluginmanager.getplugin("capturemanager")
        if capman:
            with capman.global_and_fixture_disabled():
                print(f"ACCEPTANCE {status}: {name}")
        else:
            print(f"ACCEPTANCE {status}: {name}")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion label")
