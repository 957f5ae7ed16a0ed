public class Answer {
    public static int pace(int mode, int distance) {
        int speed = 0;
        switch (mode) {
            case 1:
                speed = 3;
                break;
            case 2:
                speed = 6;
                break;
            case 3:
                speed = 9;
                break;
            default:
                speed = 1;
                break;
        }
        int time = 0;
        while (distance > 0) {
            distance = distance - speed;
            time = time + 1;
        }
        return time;
    }
}
