from gfmmd.cli.main import run

run()
