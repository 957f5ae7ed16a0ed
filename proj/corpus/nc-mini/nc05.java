public class Answer {
    public static int score(int kind, int n) {
        int value = 0;
        switch (kind) {
            case 1:
                value = 10;
                break;
            case 2:
                value = 20;
                break;
            default:
                value = 1;
                break;
        }
        for (int i = 0; i < n; i++) {
            value = value + kind;
            value = value - 1;
        }
        return value;
    }
}
