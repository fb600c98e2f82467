"""マニフェストの読み込みとレポートの組み立て・出力。"""
