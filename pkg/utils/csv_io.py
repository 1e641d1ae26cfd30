"""Small CSV helpers used by every artifact writer."""
import csv
from pathlib import Path


def format_float(value):
    """Shortest repr that parses back to the identical float."""
    if value is None:
        return ''
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(path, fieldnames, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({key: format_float(row.get(key)) for key in fieldnames})
    return path


def append_rows(path, fieldnames, rows):
    """Append rows, writing the header only when the file is new."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    new_file = not path.exists()
    with open(path, 'a', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames)
        if new_file:
            writer.writeheader()
        for row in rows:
            writer.writerow({key: format_float(row.get(key)) for key in fieldnames})
    return path


def read_rows(path):
    with open(path, newline='') as f:
        return list(csv.DictReader(f))
