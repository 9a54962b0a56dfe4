from utils.store import IssuerStore


def test_identity_registration(tmp_path) -> None:
    store = IssuerStore(tmp_path / "nested" / "issuer.db")
    assert store.get_identity("aa") is None
    store.register_identity("aa", "02ff")
    assert store.get_identity("aa") == "02ff"
    store.close()


def test_increment_stops_at_quota() -> None:
    store = IssuerStore()
    assert [store.increment_issued("aa", "2024-01-01", 2) for _ in range(3)] == [1, 2, None]
    assert store.get_issued_count("aa", "2024-01-01") == 2
    assert store.get_issued_count("aa", "2024-01-08") == 0
    assert store.get_issued_count("bb", "2024-01-01") == 0


def test_counts_persist_across_connections(tmp_path) -> None:
    path = tmp_path / "issuer.db"
    store = IssuerStore(path)
    store.increment_issued("aa", "2024-01-01", 5)
    store.close()
    assert IssuerStore(path).get_issued_count("aa", "2024-01-01") == 1
