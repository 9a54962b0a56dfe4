"""
Issuer bookkeeping in sqlite: enrolled ESU identities and per-period token
counts. Only identity addresses and counts are stored, never pseudonyms.
"""
import sqlite3
import threading
from pathlib import Path
from typing import Optional, Union


class IssuerStore:
    def __init__(self, db_file: Union[str, Path] = ":memory:"):
        self.db_file = str(db_file)
        if self.db_file != ":memory:":
            Path(self.db_file).parent.mkdir(parents=True, exist_ok=True)
        # one connection shared by issuer threads, guarded by _lock
        self._conn = sqlite3.connect(self.db_file, check_same_thread=False)
        self._lock = threading.RLock()
        self.init_store()

    def init_store(self) -> None:
        """Initialize the store tables."""
        with self._lock:
            c = self._conn.cursor()
            c.execute('''
                CREATE TABLE IF NOT EXISTS identities (
                    address TEXT PRIMARY KEY,
                    public_key TEXT NOT NULL
                )
            ''')
            c.execute('''
                CREATE TABLE IF NOT EXISTS issuance_log (
                    address TEXT NOT NULL,
                    period_start TEXT NOT NULL,
                    count INTEGER NOT NULL,
                    PRIMARY KEY (address, period_start)
                )
            ''')
            self._conn.commit()

    def register_identity(self, address: str, public_key: str) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                'INSERT OR REPLACE INTO identities (address, public_key) VALUES (?, ?)',
                (address, public_key)
            )

    def get_identity(self, address: str) -> Optional[str]:
        """Retrieve the registered public key (hex) of an identity."""
        with self._lock:
            c = self._conn.execute('SELECT public_key FROM identities WHERE address = ?', (address,))
            result = c.fetchone()
        return result[0] if result else None

    def get_issued_count(self, address: str, period_start: str) -> int:
        with self._lock:
            c = self._conn.execute(
                'SELECT count FROM issuance_log WHERE address = ? AND period_start = ?',
                (address, period_start)
            )
            result = c.fetchone()
        return result[0] if result else 0

    def increment_issued(self, address: str, period_start: str, quota: int) -> Optional[int]:
        """Add one issuance if the quota allows it; returns the new count or None."""
        with self._lock, self._conn:
            current = self.get_issued_count(address, period_start)
            if current >= quota:
                return None
            self._conn.execute(
                'INSERT OR REPLACE INTO issuance_log (address, period_start, count) VALUES (?, ?, ?)',
                (address, period_start, current + 1)
            )
            return current + 1

    def close(self) -> None:
        with self._lock:
            self._conn.close()
