from nonspecific.main import cli

cli()
