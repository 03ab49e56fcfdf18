import pytest

from mishear.wordlength import bundled_profiles

TABLE1 = {
    # language: (alpha, beta, mean_length, n_star)
    "English": (4.4, 0.60, 8.3, 7),
    "French": (4.9, 0.60, 10.1, 8),
    "Hungarian": (6.7, 0.64, 11.9, 10),
    "Finnish": (6.8, 0.58, 13.4, 12),
    "Korean": (8.2, 1.65, 6.2, 5),
    "Hindi": (6.0, 0.94, 7.7, 6),
    "Tagalog": (6.0, 0.73, 8.8, 8),
    "Burmese": (2.6, 0.28, 12.8, 9),
}

TABLE2 = {
    # language: (delta_star, n_st, m_ant)
    "English": (0.14, 25, 4),
    "French": (0.16, 26, 5),
    "Hungarian": (0.20, 27, 7),
    "Finnish": (0.24, 29, 8),
    "Korean": (0.09, 15, 3),
    "Hindi": (0.11, 20, 4),
    "Tagalog": (0.15, 23, 5),
    "Burmese": (0.19, 32, 6),
}

TABLE3 = {
    # language: (q_th, m_th, delta_th)
    "English": (0.18, 7, 0.12),
    "French": (0.15, 9, 0.14),
    "Hungarian": (0.12, 12, 0.14),
    "Finnish": (0.09, 14, 0.14),
    "Korean": (0.45, 5, 0.19),
    "Hindi": (0.26, 6, 0.15),
    "Tagalog": (0.18, 8, 0.14),
    "Burmese": (0.08, 11, 0.09),
}


@pytest.fixture(scope="session")
def profiles():
    return {p.name: p for p in bundled_profiles()}


@pytest.fixture(autouse=True)
def _criterion_label(request):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        request.node.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" not in props:
                continue
            label = props["criterion"]
            ok = rep.passed and results.get(label, True)
            results[label] = ok
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for label in sorted(results, key=_criterion_key):
        terminalreporter.write_line(f"{'PASS' if results[label] else 'FAIL'}  {label}")


def _criterion_key(label):
    head = label.split()[0]
    return (int(head) if head.isdigit() else 99, label)
