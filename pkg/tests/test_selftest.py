from services.selftest import CheckResult, run_selftest


def test_all_checks_pass():
    results = run_selftest()
    failed = [r.to_dict() for r in results if not r.passed]
    assert failed == []
    assert len(results) == 9


def test_check_result_to_dict():
    payload = CheckResult("lens sums", True, "40 sums", 0.12345).to_dict()
    assert payload == {"name": "lens sums", "passed": True, "detail": "40 sums", "seconds": 0.123}
