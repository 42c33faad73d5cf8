"""Runs one scenario against a generated Python SDK and prints the outcome."""
import json
import sys


def main():
    sdk_dir, fixture_path, api, args_json = sys.argv[1:5]
    sys.path.insert(0, sdk_dir)
    import tea_core
    import client as client_mod

    transport = tea_core.MockTransport.from_file(fixture_path)
    client = client_mod.Client(transport)
    args = json.loads(args_json)
    out = {'result': None, 'error': None}
    try:
        out['result'] = getattr(client, api)(*args)
    except tea_core.TeaValidationError:
        out['error'] = 'validation'
    except tea_core.TransportError:
        out['error'] = 'transport'
    except Exception:
        out['error'] = 'eval'
    out['request'] = transport.requests[-1] if transport.requests else None
    out['calls'] = transport.call_count
    print(json.dumps(out, sort_keys=True))


main()
