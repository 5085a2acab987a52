import pandas as pd
import pytest

from omalib.exceptions.exception import (FilePathDoesNotExists,
                                         FilePathIsNotFile, UnwritablePath)
from omalib.file.handler import (ensure_directory, find_records,
                                 get_file_type, require_file, sidecar_path,
                                 write_table)


def test_sidecar_path():
    assert sidecar_path('data/run01.csv') == 'data/run01.meta.json'
    assert sidecar_path('data/run01.CSV') == 'data/run01.meta.json'


def test_get_file_type(tmp_path):
    _table = tmp_path / 'table.csv'
    _table.write_text('a\n1\n', encoding='utf-8')
    assert get_file_type(str(_table)) == 'table'
    (tmp_path / 'table.meta.json').write_text('{}', encoding='utf-8')
    assert get_file_type(str(_table)) == 'record'
    assert get_file_type(str(tmp_path / 'table.meta.json')) == 'sidecar'
    assert get_file_type(str(tmp_path / 'figure.svg')) == 'svg'
    assert get_file_type(str(tmp_path / 'scenario.json')) == 'json'
    assert get_file_type(str(tmp_path / 'notes.xyz')) == 'unknown'


def test_require_file(tmp_path):
    with pytest.raises(FilePathDoesNotExists):
        require_file(str(tmp_path / 'missing.csv'))
    with pytest.raises(FilePathIsNotFile):
        require_file(str(tmp_path))


def test_find_records_recursive(tmp_path):
    for _sub in ('impulse', 'servo'):
        (tmp_path / _sub).mkdir()
        (tmp_path / _sub / 'r1.csv').write_text('0\n0\n', encoding='utf-8')
        (tmp_path / _sub / 'r1.meta.json').write_text('{}', encoding='utf-8')
    assert find_records(str(tmp_path)) == []
    _found = find_records(str(tmp_path), recursive=True)
    assert [_path.split('/')[-2] for _path in _found] == ['impulse', 'servo']


def test_find_records_missing_directory(tmp_path):
    with pytest.raises(FilePathDoesNotExists):
        find_records(str(tmp_path / 'nope'))


def test_write_table_full_precision(tmp_path):
    _path = write_table(pd.DataFrame({'label': ['b1'], 'value': [0.1]}), str(tmp_path / 't.csv'))
    assert open(_path, encoding='utf-8').read() == 'label,value\nb1,0.10000000000000001\n'


def test_write_table_missing_directory(tmp_path):
    with pytest.raises(UnwritablePath):
        write_table(pd.DataFrame({'a': [1]}), str(tmp_path / 'no' / 't.csv'))


def test_ensure_directory(tmp_path):
    _path = str(tmp_path / 'a' / 'b')
    assert ensure_directory(_path) == _path
    assert (tmp_path / 'a' / 'b').is_dir()
