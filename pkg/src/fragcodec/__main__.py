from fragcodec.cli import main

main()
